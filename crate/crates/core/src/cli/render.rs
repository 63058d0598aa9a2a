//! Plain-text reports.

use std::fmt::Write;

use crate::classifier::{DecomposabilityCertificate, DegenerationExperiment, MonodromyReport, SweepSummary};
use crate::fibration::CenterKind;

fn blocks_text(blocks: &[Vec<usize>]) -> String {
    blocks
        .iter()
        .map(|b| format!("{{{}}}", b.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn classify(r: &MonodromyReport, cert: &DecomposabilityCertificate) -> String {
    let mut s = String::new();
    let g = &r.group_summary;
    let diag = &r.diagnostics;
    let labels: Vec<String> = g.labels.iter().map(|l| l.to_string()).collect();
    let _ = writeln!(s, "{}", r.verdict_line());
    let _ = writeln!(
        s,
        "instance: degree {} hypersurface in P^{}, {} center, projection degree {}",
        r.instance.degree,
        r.instance.dimension + 1,
        match r.instance.center_kind {
            CenterKind::Inner => "inner",
            CenterKind::Outer => "outer",
        },
        r.instance.effective_degree
    );
    let _ = writeln!(s, "group: order {}, labels [{}]", g.order, labels.join(", "));
    let _ = writeln!(s, "generators: {}", g.generators.join(" "));
    let non_simple = diag.genericity.non_simple_count;
    let _ = writeln!(
        s,
        "branch points: {} ({} non-simple), discriminant degree {}",
        diag.branch_count, non_simple, diag.discriminant_degree
    );
    let _ = writeln!(
        s,
        "petal cycle types: {}",
        diag.petal_cycle_types
            .iter()
            .map(|t| format!("{t:?}"))
            .collect::<Vec<_>>()
            .join(" ")
    );
    let _ = writeln!(s, "relation holds: {}", diag.relation_holds);
    if !diag.genericity.generic {
        let _ = writeln!(s, "genericity: {}", diag.genericity.reasons.join("; "));
    }
    let _ = writeln!(s, "decomposability: {}", cert.summary);
    for t in &cert.towers {
        let _ = writeln!(s, "  blocks of size {}: {}", t.block_size, blocks_text(&t.blocks));
    }
    let _ = writeln!(s, "attempts: {}, seed: {}", diag.attempts.len(), r.seeds.seed);
    s
}

pub fn sweep(summary: &SweepSummary) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "sweep n = {}, d = {}, seed = {}", summary.n, summary.d, summary.seed);
    let _ = writeln!(s, "{:>5}  {:>20}  {:<28}  {}", "trial", "seed", "outer", "inner");
    for row in &summary.rows {
        let _ = writeln!(
            s,
            "{:>5}  {:>20}  {:<28}  {}",
            row.trial, row.seed, row.outer.verdict, row.inner.verdict
        );
    }
    let _ = writeln!(
        s,
        "outer uniform {}/{}, inner uniform {}/{}",
        summary.outer_uniform, summary.trials, summary.inner_uniform, summary.trials
    );
    for f in &summary.failures {
        let _ = writeln!(s, "failure: trial {} seed {} {} center: {}", f.trial, f.seed, f.center, f.message);
    }
    s
}

pub fn degenerate(exp: &DegenerationExperiment) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "degeneration: degree {}, special monodromy order {}, center on H: {}",
        exp.degree, exp.m0_order, exp.center_on_h
    );
    let _ = writeln!(
        s,
        "{:>26}  {:>8}  {:>8}  {:>10}  {}",
        "s", "halvings", "margin", "order M_s", "contained"
    );
    for row in &exp.rows {
        let s_text = format!("{:+.3e}{:+.3e}i", row.s_used[0], row.s_used[1]);
        let _ = writeln!(
            s,
            "{:>26}  {:>8}  {:>8.4}  {:>10}  {}",
            s_text, row.halvings, row.matching_margin, row.ms_order, row.contained
        );
    }
    let _ = writeln!(s, "all contained: {}", exp.all_contained());
    s
}

pub fn group(
    order: &str,
    orbits: &[Vec<usize>],
    transitivity: usize,
    primitive: bool,
    systems: &[Vec<Vec<usize>>],
    labels: &[String],
    degree: usize,
) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "degree {degree}, order {order}");
    let _ = writeln!(s, "orbits: {}", blocks_text(orbits));
    if transitivity > 0 {
        let _ = writeln!(s, "{transitivity}-transitive, {}", if primitive { "primitive" } else { "imprimitive" });
    } else {
        let _ = writeln!(s, "intransitive");
    }
    for b in systems {
        let _ = writeln!(s, "blocks of size {}: {}", b[0].len(), blocks_text(b));
    }
    let _ = writeln!(s, "labels: {}", labels.join(", "));
    s
}
