use std::io::Write;
use std::path::Path;

use crate::args::{Common, Format};
use crate::Failure;

/// `# key=value` header shared by every output file.
pub fn header(command: &str, common: &Common, fields: &[(&str, String)]) -> Vec<(String, String)> {
    let mut all = vec![("command".to_string(), command.to_string())];
    all.extend(fields.iter().map(|(k, v)| (k.to_string(), v.clone())));
    all.push(("workers".into(), common.workers.to_string()));
    all
}

pub fn config_text(header: &[(String, String)]) -> String {
    let pairs: Vec<(&str, String)> = header
        .iter()
        .map(|(k, v)| (k.as_str(), v.clone()))
        .collect();
    perc_core::output::config_block(&pairs)
}

/// Writes the CSV and/or SVG renderings according to `--format` and `--out`.
pub fn emit(common: &Common, csv: &str, svg: Option<&str>) -> Result<(), Failure> {
    let want_svg = matches!(common.format, Format::Svg | Format::Both);
    let want_csv = matches!(common.format, Format::Csv | Format::Both);
    if want_svg && svg.is_none() {
        return Err(Failure::usage(
            "this command has no SVG rendering; use --format csv",
        ));
    }
    match &common.out {
        None => {
            if common.format == Format::Both {
                return Err(Failure::usage("--format both needs --out"));
            }
            let text = if want_csv { csv } else { svg.unwrap() };
            std::io::stdout().write_all(text.as_bytes())?;
        }
        Some(path) => {
            if want_csv {
                write(&path.with_extension("csv"), csv)?;
            }
            if let (true, Some(svg)) = (want_svg, svg) {
                write(&path.with_extension("svg"), svg)?;
            }
        }
    }
    Ok(())
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure::failed(format!("cannot write {}: {e}", path.display())))
}
