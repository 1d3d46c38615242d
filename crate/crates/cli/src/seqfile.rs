//! Sequence files: an optional `# n=<n> sigma=<sigma> spec=<spec> seed=<seed>`
//! header, then one color per line.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rebuf_core::{ColorId, ColorSequence, DistributionSpec};

use crate::error::{CliError, Result};

/// Metadata carried in the header line.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceHeader {
    /// Item count.
    pub n: usize,
    /// Color universe size.
    pub sigma: usize,
    /// Generating distribution, as a spec string.
    pub spec: String,
    /// Generator seed.
    pub seed: u64,
}

/// A parsed sequence file.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceFile {
    /// Header, when the file had one.
    pub header: Option<SequenceHeader>,
    /// The items.
    pub items: ColorSequence,
}

fn parse_header(line: &str) -> Option<SequenceHeader> {
    let body = line.strip_prefix('#')?.trim();
    let mut n = None;
    let mut sigma = None;
    let mut spec = None;
    let mut seed = None;
    for field in body.split_whitespace() {
        let (k, v) = field.split_once('=')?;
        match k {
            "n" => n = v.parse().ok(),
            "sigma" => sigma = v.parse().ok(),
            "spec" => spec = Some(v.to_string()),
            "seed" => seed = v.parse().ok(),
            _ => {}
        }
    }
    Some(SequenceHeader {
        n: n?,
        sigma: sigma?,
        spec: spec?,
        seed: seed?,
    })
}

/// Parses file text. Blank lines and other `#` comment lines are ignored;
/// a header, if present, must agree with the body.
pub fn parse_sequence(text: &str, path: &Path) -> Result<SequenceFile> {
    let mut header = None;
    let mut items = Vec::new();
    let err = |line: usize, message: String| CliError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if header.is_none() && items.is_empty() {
                header = parse_header(line);
            }
            continue;
        }
        let value: u32 = line
            .parse()
            .map_err(|_| err(i + 1, format!("expected a color id, found '{line}'")))?;
        let color =
            ColorId::new(value).ok_or_else(|| err(i + 1, "color ids start at 1".to_string()))?;
        items.push(color);
    }
    let items = ColorSequence::from(items);
    if let Some(h) = &header {
        if h.n != items.len() {
            return Err(err(
                1,
                format!("header says n={} but file has {}", h.n, items.len()),
            ));
        }
        items
            .check_universe(h.sigma as u32)
            .map_err(|e| err(1, e.to_string()))?;
    }
    Ok(SequenceFile { header, items })
}

/// Reads and parses a sequence file.
pub fn read_sequence(path: &Path) -> Result<SequenceFile> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_sequence(&text, path)
}

/// Renders a sequence file with its header.
pub fn format_sequence(
    items: &ColorSequence,
    spec: &DistributionSpec,
    sigma: usize,
    seed: u64,
) -> String {
    let mut out = format!(
        "# n={} sigma={} spec={} seed={}\n",
        items.len(),
        sigma,
        spec,
        seed
    );
    for c in items {
        let _ = writeln!(out, "{c}");
    }
    out
}

/// Writes a sequence file with its header.
pub fn write_sequence(
    path: &Path,
    items: &ColorSequence,
    spec: &DistributionSpec,
    sigma: usize,
    seed: u64,
) -> Result<()> {
    fs::write(path, format_sequence(items, spec, sigma, seed)).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rebuf_core::color::seq;

    #[test]
    fn header_and_body() {
        let text = "# n=3 sigma=4 spec=zipf:a=1.1 seed=9\n1\n4\n\n2\n";
        let f = parse_sequence(text, Path::new("x")).unwrap();
        assert_eq!(f.items, seq(&[1, 4, 2]));
        let h = f.header.unwrap();
        assert_eq!(
            (h.n, h.sigma, h.spec.as_str(), h.seed),
            (3, 4, "zipf:a=1.1", 9)
        );
    }

    #[test]
    fn headerless_with_comments() {
        let f = parse_sequence("# example input\n2\n2\n", Path::new("x")).unwrap();
        assert!(f.header.is_none());
        assert_eq!(f.items.len(), 2);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(parse_sequence("1\nx\n", Path::new("x")).is_err());
        assert!(parse_sequence("0\n", Path::new("x")).is_err());
        assert!(parse_sequence("# n=2 sigma=2 spec=uniform seed=1\n1\n", Path::new("x")).is_err());
        assert!(parse_sequence("# n=1 sigma=2 spec=uniform seed=1\n3\n", Path::new("x")).is_err());
    }

    #[test]
    fn empty_body_keeps_header() {
        let text = format_sequence(&seq(&[]), &DistributionSpec::Uniform, 5, 3);
        assert_eq!(text, "# n=0 sigma=5 spec=uniform seed=3\n");
        let f = parse_sequence(&text, Path::new("x")).unwrap();
        assert!(f.items.is_empty());
        assert_eq!(f.header.unwrap().sigma, 5);
    }
}
