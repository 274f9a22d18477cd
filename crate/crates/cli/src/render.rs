//! Plain-text renderings of the reports.

use std::fmt::Write;

use gmbqc::analysis::{AnalysisReport, ComputationReport, Prop1Report, QuasiReport};
use gmbqc::ext::H2Result;
use gmbqc::hvm::DeltaResult;
use gmbqc::proofs::CertificateJson;

fn bits(b: &[u8]) -> String {
    b.iter().map(|x| char::from(b'0' + x)).collect()
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| x.to_string())
}

pub fn report(r: &AnalysisReport) -> String {
    let mut s = String::new();
    let m = &r.summary;
    let _ = writeln!(s, "== {} ==", m.name);
    let _ = writeln!(
        s,
        "{} qubits, {} observables ({} measurable, {} outputs), {} constraint rows",
        m.n_qubits,
        m.observables.len(),
        m.measurable.len(),
        m.outputs.len(),
        m.constraint_rows
    );
    let _ = writeln!(s, "dim V = {}, separation {}", m.dim_v, yes(m.separation));
    let _ = writeln!(s, "group order {}: {}", m.group_order, m.group_elements.join(" "));
    if let Some(c) = &r.computation {
        s.push('\n');
        s.push_str(&computation(c));
    }
    if let Some(p) = &r.phase {
        let _ = writeln!(
            s,
            "\nsymmetric phase functions: {} (family dim {}), exact member: {}",
            yes(p.symmetric),
            opt(p.family_dim),
            opt(p.exact_member_exists.map(yes))
        );
    }
    match &r.prop1 {
        Some(Prop1Report::Contextual { certificate, verified }) => {
            let _ = writeln!(s, "no exact phase function reproduces the target: contextual ({} rows, verified {})", certificate.len(), yes(*verified));
        }
        Some(Prop1Report::Inconclusive { witness_outputs }) => {
            let _ = writeln!(s, "exact phase function found, outputs {}", bits(witness_outputs));
        }
        None => {}
    }
    let h = &r.hvm;
    let _ = writeln!(s, "\nncHVM assignments: {}", h.assignment_count);
    if let Some(l) = &h.lemma1 {
        let _ = writeln!(s, "  relabelling closed {}, differences in V {}", yes(l.invariance), yes(l.differences_in_v));
    }
    if let Some(d) = &h.delta {
        let _ = writeln!(
            s,
            "  delta {} (classical witness bound {}), parity bound {}, lookup table {:?}",
            d.delta,
            opt(h.classical_witness_bound),
            opt(h.parity_lower_bound.map(yes)),
            h.reduction_table.clone().unwrap_or_default()
        );
    }
    s.push('\n');
    let p = &r.proofs;
    s.push_str(&proofs(&p.parity, &p.symmetry, &p.symmetry_element, p.related_parity_valid, p.lemma4_obstruction));
    if let Some(q) = &r.quasi {
        s.push('\n');
        s.push_str(&quasi(q));
    }
    if let Some(e) = &r.extension {
        let _ = writeln!(
            s,
            "\ndim N = {}, dim H2 = {}, lambda trivial {}, |E| = {}",
            e.dim_n,
            opt(e.h2_dim),
            opt(e.lambda_trivial.map(yes)),
            opt(e.extension_order)
        );
        if let Some(note) = &e.note {
            let _ = writeln!(s, "  note: {note}");
        }
    }
    s
}

pub fn computation(c: &ComputationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "target {}, witness {:.12}", bits(&c.target), c.witness);
    for (g, (o, ctx)) in c.ideal_outputs.iter().zip(&c.contexts).enumerate() {
        let _ = writeln!(
            s,
            "  input {g}: [{}] -> {} with p = {:.12}{}",
            ctx.join(" "),
            o.bit,
            o.success_prob,
            if o.degenerate { " (degenerate)" } else { "" }
        );
    }
    let _ = writeln!(
        s,
        "  sampled {} shots per input (seed {}), mismatches {:?}",
        c.sampling.shots, c.sampling.seed, c.sampling.mismatches
    );
    s
}

pub fn delta(target: &[u8], d: &Option<DeltaResult>, parity: bool) -> String {
    match d {
        None => format!("target {}: no ncHVM assignments exist\n", bits(target)),
        Some(d) => format!(
            "target {}: delta {} over {} assignments, classical witness bound {}, parity bound {}\n",
            bits(target),
            d.delta,
            d.assignments_swept,
            d.classical_witness_bound(),
            yes(parity)
        ),
    }
}

pub fn proofs(
    parity: &Option<CertificateJson>,
    symmetry: &Option<CertificateJson>,
    element: &Option<String>,
    related: Option<bool>,
    lemma4: bool,
) -> String {
    let mut s = String::new();
    match parity {
        Some(CertificateJson::Parity { rows }) => {
            let _ = writeln!(s, "parity proof over {} rows: {:?}", rows.len(), rows);
        }
        _ => s.push_str("no parity proof\n"),
    }
    match (symmetry, element) {
        (Some(CertificateJson::Symmetry { rows, .. }), Some(h)) => {
            let _ = writeln!(s, "symmetry proof with {h} over {} rows, related parity proof valid {}", rows.len(), opt(related.map(yes)));
        }
        _ => s.push_str("no symmetry proof\n"),
    }
    let _ = writeln!(s, "sign-free group: {}", yes(lemma4));
    s
}

pub fn quasi(q: &QuasiReport) -> String {
    format!(
        "quasi-probability over {} points: values {:?}, {} negative, total {:.12}, round trip {}, covariance {}\n",
        q.points,
        q.distinct_values,
        q.negative_points,
        q.total,
        yes(q.fourier_round_trip),
        opt(q.covariance.map(yes))
    )
}

pub fn quasi_csv(points: &[(usize, &[u8], f64)]) -> String {
    let mut s = String::from("index,v,value\n");
    for (i, v, value) in points {
        let _ = writeln!(s, "{i},{},{value}", bits(v));
    }
    s
}

pub fn h2(order: usize, dim: usize, r: &H2Result, exhaustive: Option<usize>) -> String {
    let mut s = format!(
        "|G| = {order}, dim N = {dim}: dim Z2 = {}, dim B2 = {}, dim H2 = {}\n",
        r.cocycle_dim, r.coboundary_dim, r.dim
    );
    if let Some(e) = exhaustive {
        let _ = writeln!(s, "exhaustive enumeration: dim H2 = {e}");
    }
    s
}
