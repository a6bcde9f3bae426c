use std::fs;
use std::path::Path;

use simplex_moments::ExponentVector;

use crate::error::CliError;

/// Parses `2, 0 ,1`.
pub fn parse_inline(text: &str) -> Result<ExponentVector, CliError> {
    let values = text
        .split(',')
        .enumerate()
        .map(|(k, field)| parse_value(field.trim(), &format!("count {}", k + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    validate(values)
}

/// One value per line; blank lines and `#` comments are ignored.
pub fn parse_lines(text: &str) -> Result<ExponentVector, CliError> {
    let mut values = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if !content.is_empty() {
            values.push(parse_value(content, &format!("line {}", k + 1))?);
        }
    }
    validate(values)
}

pub fn read_file(path: &Path) -> Result<ExponentVector, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_lines(&text)
}

fn parse_value(field: &str, at: &str) -> Result<f64, CliError> {
    field
        .parse::<f64>()
        .map_err(|_| CliError::Input(format!("{at}: `{field}` is not a number")))
}

fn validate(values: Vec<f64>) -> Result<ExponentVector, CliError> {
    ExponentVector::new(values).map_err(|e| CliError::Input(format!("counts: {e}")))
}

/// `"1,1,2"` → `[1, 1, 2]`, each entry a 1-based bin no larger than `bins`.
pub fn parse_moment(text: &str, bins: usize) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|field| {
            let field = field.trim();
            match field.parse::<usize>() {
                Ok(i) if (1..=bins).contains(&i) => Ok(i),
                _ => Err(CliError::Input(format!(
                    "--moment {text}: `{field}` is not a bin in 1..={bins}"
                ))),
            }
        })
        .collect()
}
