//! `--config FILE`: a JSON object whose keys are flag names. Its entries are
//! spliced in right after the subcommand, so flags given on the command line
//! take precedence.

use serde_json::Value;

use crate::{CliError, CliResult};

pub(crate) fn expand(mut args: Vec<String>) -> CliResult<Vec<String>> {
    let Some(sub) = args.iter().skip(1).position(|a| !a.starts_with('-')).map(|p| p + 1) else {
        return Ok(args);
    };
    let mut path = None;
    let mut i = sub + 1;
    while i < args.len() {
        if args[i] == "--config" {
            if i + 1 >= args.len() {
                return Err(CliError::Parse("--config needs a file".into()));
            }
            path = Some(args.remove(i + 1));
            args.remove(i);
        } else if let Some(p) = args[i].strip_prefix("--config=") {
            path = Some(p.to_string());
            args.remove(i);
        } else {
            i += 1;
        }
    }
    let Some(path) = path else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Parse(format!("{path}: {e}")))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{path}: {e}")))?;
    let Value::Object(map) = value else {
        return Err(CliError::Parse(format!("{path}: config must be a JSON object")));
    };
    let mut extra = Vec::new();
    for (key, v) in map {
        let flag = format!("--{key}");
        match v {
            Value::Null | Value::Bool(false) => {}
            Value::Bool(true) => extra.push(flag),
            Value::Array(items) => {
                let parts = items.iter().map(scalar).collect::<CliResult<Vec<_>>>()?;
                extra.push(flag);
                extra.push(parts.join(","));
            }
            other => {
                extra.push(flag);
                extra.push(scalar(&other)?);
            }
        }
    }
    args.splice(sub + 1..sub + 1, extra);
    Ok(args)
}

fn scalar(v: &Value) -> CliResult<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        _ => Err(CliError::Parse(format!("unsupported config value {v}"))),
    }
}
