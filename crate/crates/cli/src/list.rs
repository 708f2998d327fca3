//! The `list` table.

use pielm::cases::{all_cases, TestCase};

fn bracket(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(usize::to_string).collect();
    format!("[{}]", parts.join(","))
}

fn pielm_column(c: &TestCase) -> String {
    c.default_pielm.as_ref().map_or_else(
        || "-".to_string(),
        |p| {
            if c.problem.domain.is_time_dependent() {
                bracket(&[p.n_interior, p.n_boundary, p.n_initial, p.n_neurons])
            } else {
                bracket(&[p.n_interior, p.n_boundary, p.n_neurons])
            }
        },
    )
}

fn dpielm_column(c: &TestCase) -> String {
    match &c.reported_dpielm {
        Some(a) if c.paper_scale_dpielm => format!("{} (paper-scale)", bracket(a)),
        Some(a) => bracket(a),
        None => "-".to_string(),
    }
}

fn order_column(c: &TestCase) -> String {
    c.expected_order.map_or_else(|| "-".to_string(), |o| format!("O({o:.0e})"))
}

/// One row per case: id, methods, default architectures, reported error order
/// and description.
pub fn list_cases() -> String {
    let mut rows = vec![[
        "id".to_string(),
        "methods".to_string(),
        "pielm".to_string(),
        "dpielm".to_string(),
        "order".to_string(),
        "description".to_string(),
    ]];
    for c in all_cases() {
        let methods: Vec<String> = c.methods().iter().map(ToString::to_string).collect();
        rows.push([
            c.id.to_string(),
            methods.join("+"),
            pielm_column(&c),
            dpielm_column(&c),
            order_column(&c),
            c.description.to_string(),
        ]);
    }
    let widths: Vec<usize> = (0..5).map(|k| rows.iter().map(|r| r[k].len()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in &rows {
        for k in 0..5 {
            out.push_str(&format!("{:<w$}  ", r[k], w = widths[k]));
        }
        out.push_str(&r[5]);
        out.push('\n');
    }
    out
}
