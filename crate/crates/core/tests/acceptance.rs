use fourier_interp::suite::{run_all, CriterionResult, SuiteConfig, LITERAL_INTERTWINING};

/// Criteria whose stated form cannot hold, with the one metric expected to
/// fail. Criterion 1: the stated X, Y and Fourier transform conjugate X to −Y.
const KNOWN_FAILURES: &[(u8, &str)] = &[(1, LITERAL_INTERTWINING)];

fn known(r: &CriterionResult) -> Option<&'static str> {
    KNOWN_FAILURES.iter().find(|(id, _)| *id == r.id).map(|&(_, m)| m)
}

// Plain binary (harness = false) so the per-criterion lines always print.
fn main() {
    let results = run_all(&SuiteConfig::default());
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} [{status}] {}: {}", r.id, r.title, r.summary());
        for m in &r.metrics {
            println!("    {:<60} {:>12.4e}{}", m.name, m.value, if m.ok { "" } else { "  <-- out of range" });
        }
        for n in &r.notes {
            println!("    {n}");
        }
    }
    assert_eq!(results.len(), 10);
    let mut unexpected = Vec::new();
    for r in &results {
        match known(r) {
            None if !r.passed => unexpected.push(format!("criterion {} failed", r.id)),
            Some(metric) => {
                let failing: Vec<&str> = r.metrics.iter().filter(|m| !m.ok).map(|m| m.name.as_str()).collect();
                let notes_ok = !r.notes.iter().any(|n| n.starts_with("FAIL"));
                let time_ok = r.time_limit_ms.is_none_or(|l| r.elapsed_ms <= l);
                if failing != [metric] || !notes_ok || !time_ok {
                    unexpected.push(format!("criterion {}: failing {failing:?}, expected only {metric:?}", r.id));
                }
            }
            None => {}
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: ok");
    } else {
        eprintln!("acceptance: unexpected failures {unexpected:?}");
        std::process::exit(1);
    }
}
