//! Stage tables: input queue, buffer and output after every step of a run.

use rebuf_core::{replay, ColorId, ColorSequence, SimulationResult, TraceEvent, TraceKind};

use crate::error::Result;

fn join(items: &[ColorId]) -> String {
    if items.is_empty() {
        return "-".into();
    }
    items
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn describe(event: Option<&TraceEvent>) -> String {
    let Some(e) = event else {
        return "start".into();
    };
    let color = e.color.map(|c| c.to_string()).unwrap_or_default();
    match e.kind {
        TraceKind::Fill => format!("fill {}", e.items),
        TraceKind::ForwardCurrentColor => format!("forward {color} x{}", e.items),
        TraceKind::Select => format!("select {color} x{}", e.items),
        TraceKind::Skip => format!("skip {color}"),
        TraceKind::Drain => format!("drain {color} x{}", e.items),
    }
}

/// Renders the stage table of `result`, which must come from running
/// `input` with buffer size `k`.
pub fn render_trace(input: &ColorSequence, k: usize, result: &SimulationResult) -> Result<String> {
    let replayed = replay(input, k, &result.trace)?;
    let rows: Vec<[String; 5]> = replayed
        .stages
        .iter()
        .enumerate()
        .map(|(i, s)| {
            [
                (i + 1).to_string(),
                describe(s.event.as_ref()),
                join(&s.input),
                join(&s.buffer),
                join(&s.output),
            ]
        })
        .collect();
    let header = ["stage", "step", "input", "buffer", "output"].map(String::from);
    let mut widths = header.clone().map(|h| h.len());
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    for row in std::iter::once(&header).chain(&rows) {
        let line = row
            .iter()
            .zip(widths)
            .map(|(cell, w)| format!("{cell:<w$}"))
            .collect::<Vec<_>>()
            .join(" | ");
        out.push_str(line.trim_end());
        out.push('\n');
    }
    Ok(out)
}
