use anyhow::{Context, Result};
use biriesz::indices::{
    a_n, alpha, b_n, contradictions, critical_delta, delta_region, lattice, parse_rational,
    region_classify, summarize, ExponentTriple, Region, Q,
};

use super::{s, timed};
use crate::config::Params;
use crate::report::{Check, Outcome, Table};

/// One row per lattice triple: the best bounded and unbounded statements.
pub fn threshold_rows(n: u32, step: Q) -> Result<Table> {
    let mut t = Table::new(
        "thresholds",
        &[
            "n",
            "p1",
            "p2",
            "p",
            "region",
            "bounded_if",
            "unbounded_if",
            "source",
        ],
    );
    for triple in lattice(step)? {
        let verdicts = critical_delta(n, &triple);
        let (b, u) = summarize(&verdicts);
        let region = region_classify(n, triple.inv_p1(), triple.inv_p2());
        let mut source: Vec<String> = b
            .iter()
            .chain(u.iter())
            .map(|v| v.source.to_string())
            .collect();
        if let Some(note) = b.and_then(|v| v.note) {
            source.push(note.to_string());
        }
        t.push(vec![
            s(n),
            triple.p1_string(),
            triple.p2_string(),
            triple.p_string(),
            region.name().to_string(),
            b.map(|v| v.condition()).unwrap_or_default(),
            u.map(|v| v.condition()).unwrap_or_default(),
            source.join("; "),
        ]);
    }
    Ok(t)
}

fn q(a: i128, b: i128) -> Q {
    Q::new(a, b)
}

fn triple(s: &str) -> Result<ExponentTriple> {
    s.parse().with_context(|| format!("triple {s}"))
}

/// (label, matches) for the worked rational values.
fn worked_examples() -> Result<Vec<(&'static str, bool)>> {
    let zero = Q::from_integer(0);
    let one = Q::from_integer(1);
    let best = |n: u32, t: &str| -> Result<(Option<Q>, Option<Q>)> {
        let v = critical_delta(n, &triple(t)?);
        let (b, u) = summarize(&v);
        Ok((b.map(|v| v.threshold), u.map(|v| v.threshold)))
    };
    Ok(vec![
        ("a_2 = 3/4", a_n(2) == q(3, 4)),
        ("b_2 = 11/12", b_n(2) == q(11, 12)),
        (
            "alpha(0.8, 0.8) = 4/3",
            alpha(2, q(4, 5), q(4, 5), zero)? == q(4, 3),
        ),
        ("alpha(1, 1) = 3/2", alpha(2, one, one, zero)? == q(3, 2)),
        ("(3/4, 0) not in Delta(2)", !delta_region(2, q(3, 4), zero)),
        ("(1, 0) in Delta(2)", delta_region(2, one, zero)),
        ("(0.8, 0.1) in Delta(2)", delta_region(2, q(4, 5), q(1, 10))),
        (
            "(1/4, 1/4) in region I",
            region_classify(2, q(1, 4), q(1, 4)) == Region::I,
        ),
        (
            "(1, 1) in region IV",
            region_classify(2, one, one) == Region::IV,
        ),
        (
            "(0.8, 0.95) in region V",
            region_classify(2, q(4, 5), q(19, 20)) == Region::V,
        ),
        (
            "(2,2,1): bounded > 0, unbounded <= 0",
            best(2, "2,2,1")? == (Some(zero), Some(zero)),
        ),
        (
            "(1,inf,1): bounded > 1, unbounded <= 1/2",
            best(2, "1,inf,1")? == (Some(one), Some(q(1, 2))),
        ),
        (
            "(4,4,2): bounded > 1/2",
            best(2, "4,4,2")?.0 == Some(q(1, 2)),
        ),
    ])
}

pub fn threshold_table(p: &mut Params) -> Result<Outcome> {
    let n = p.usize("n", 2)? as u32;
    let step = parse_rational(&p.string("lattice", "1/12"))?;
    let sweep_step = parse_rational(&p.string("sweep.lattice", "1/99"))?;
    let sweep_dims = p.usize_list("sweep.dims", &[1, 2, 3])?;
    let mut out = Outcome::default();

    let table = timed(&mut out, "table", || threshold_rows(n, step))?;
    out.tables.push(table);

    let mut examples = Table::new("worked_examples", &["statement", "holds"]);
    let worked = worked_examples()?;
    for (label, ok) in &worked {
        examples.push(vec![label.to_string(), s(ok)]);
    }
    let misses = worked.iter().filter(|(_, ok)| !ok).count();
    out.checks.push(Check::at_most(
        Some(8),
        "worked values not reproduced",
        misses as f64,
        0.0,
    ));
    out.tables.push(examples);

    let mut conflicts = Table::new(
        "contradictions",
        &[
            "n",
            "p1",
            "p2",
            "p",
            "bounded_if",
            "bounded_source",
            "unbounded_if",
            "unbounded_source",
        ],
    );
    let mut swept = 0usize;
    timed(&mut out, "sweep", || {
        let grid = lattice(sweep_step)?;
        for &dim in &sweep_dims {
            for t in &grid {
                swept += 1;
                for (b, u) in contradictions(&critical_delta(dim as u32, t)) {
                    conflicts.push(vec![
                        s(dim),
                        t.p1_string(),
                        t.p2_string(),
                        t.p_string(),
                        b.condition(),
                        b.source.to_string(),
                        u.condition(),
                        u.source.to_string(),
                    ]);
                }
            }
        }
        Ok(())
    })?;
    out.extra.insert("swept_triples".into(), swept.into());
    out.checks.push(Check::at_most(
        Some(8),
        "contradictions in the sweep",
        conflicts.rows.len() as f64,
        0.0,
    ));
    out.tables.push(conflicts);
    Ok(out)
}
