//! `demo`: every numeric claim of the worked examples, recomputed exactly.
//!
//! Each claim becomes one check. The run exits 0 iff no check fails; the one
//! known discrepancy, the pathology degree of `φ₀`, is reported as FLAGGED.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subm_core::colorings::{favors_witness, hom_cover_number, partition_coloring, ramsey_extract, sierpinski_coloring, sierpinski_parts, Coloring};
use subm_core::combine::{sum_combine, sum_exh_diagnostics, sup_combine, symdiff_metric};
use subm_core::ideals::{
    block_multiples, bounded_on_prefix, diagonal_stream, ed_cover_spec, ed_mazur_filtration, ed_sup_representation, ejemadecuada_generator, fin_times_empty_filtration,
    has_property_a, is_partial_selector, phi_fin_times_empty, psi_block_cover, ArithV1, Boundedness, EdSup, EjemVariant, Intervals, PartitionScheme, PropertyA,
};
use subm_core::pathology::{hat_phi, integer_pathology_criterion, pathology_degree, subset_values, verify_hull_certificate, CriterionVerdict};
use subm_core::rational::{int, pow2_inv, rat};
use subm_core::selectors::{bp_select, c0like_selector, instances, property_a_selector, schreier_selector, tall_selector, BpMode, SelectorError};
use subm_core::spec::{validate_table, Block, SumPart, TableSpec};
use subm_core::{ExtRat, FinSet, PointMeasure, Rational, SetStream, SparseVec, SubmeasureSpec, VectorSeq};

use crate::commands::verdict_string;
use crate::report::{q, q_fraction, Report, Status};
use crate::specfile::LoadedSpec;
use crate::CliError;

/// Published values of `φ₀` on the subsets of `{0, 1, 2}`, indexed by bitmask.
pub const PHI0_VALUES: [u64; 8] = [0, 1, 1, 1, 1, 1, 1, 2];

pub fn phi0_table() -> TableSpec {
    TableSpec::new(3, PHI0_VALUES.iter().map(|&v| ExtRat::from_int(v)).collect()).expect("eight values")
}

/// Length of the block-sequence selection on the perturbed basis.
const BP_LEN: usize = 1000;

struct Ledger<'a>(&'a mut Report);

impl Ledger<'_> {
    fn claim(&mut self, name: &str, claim: impl Into<String>, computed: impl Into<String>, ok: bool) {
        self.0.check(name, claim, computed, Status::from_bool(ok));
    }

    fn error(&mut self, name: &str, claim: impl Into<String>, e: impl std::fmt::Display) {
        self.0.check(name, claim, format!("error: {e}"), Status::Fail);
    }
}

/// Runs the demo; `phi0` replaces the published `φ₀` table.
pub fn cmd_demo(phi0: Option<&LoadedSpec>) -> Result<Report, CliError> {
    let (table, bytes) = match phi0 {
        Some(s) => match &s.spec {
            SubmeasureSpec::Table(t) if t.universe() == 3 => (t.clone(), s.bytes.clone()),
            _ => return Err(CliError::Usage("--phi0-table must be a table spec on 3 points".into())),
        },
        None => (phi0_table(), Vec::new()),
    };
    let mut r = Report::new("demo", &[&bytes]);
    let mut l = Ledger(&mut r);
    phi0_checks(&mut l, table);
    ed_checks(&mut l);
    fin_times_empty_checks(&mut l);
    preservation_checks(&mut l);
    vector_checks(&mut l);
    ejemadecuada_checks(&mut l);
    selector_checks(&mut l);
    ramsey_checks(&mut l);
    metric_checks(&mut l);
    Ok(r)
}

fn phi0_checks(l: &mut Ledger, table: TableSpec) {
    let pts = [0u64, 1, 2];
    let diffs: Vec<String> = (0..8u64)
        .filter(|&m| *table.value_at(m) != ExtRat::from_int(PHI0_VALUES[m as usize]))
        .map(|m| format!("φ₀({}) = {}, published {}", FinSet::from_mask(&pts, m), table.value_at(m), PHI0_VALUES[m as usize]))
        .collect();
    l.claim("φ₀ table", "published values", if diffs.is_empty() { "matches".into() } else { diffs.join("; ") }, diffs.is_empty());
    let bad = validate_table(&table);
    l.claim("φ₀ axioms", "monotone and subadditive", bad.first().map_or("valid".into(), |v| v.to_string()), bad.is_empty());
    let spec = SubmeasureSpec::Table(table);
    let full = FinSet::from(pts);
    match spec.eval(&full) {
        Ok(v) => l.claim("φ₀({0,1,2})", "2", v.to_string(), v == ExtRat::from_int(2)),
        Err(e) => l.error("φ₀({0,1,2})", "2", e),
    }
    match integer_pathology_criterion(&spec, &full) {
        Ok(v) => l.claim("φ₀ criterion", "FIRED on {0,1,2}", verdict_string(&v), matches!(v, CriterionVerdict::Fired { .. })),
        Err(e) => l.error("φ₀ criterion", "FIRED on {0,1,2}", e),
    }
    match hat_phi(&spec, &full) {
        Ok(h) => {
            let ok = subset_values(&spec, &full).map_err(|e| e.to_string()).and_then(|phi| verify_hull_certificate(&full, &phi, &h).map_err(str::to_string));
            l.claim("φ̂₀({0,1,2})", "hull certificate verifies", format!("{} ({})", q(&h.value), ok.clone().err().unwrap_or_else(|| "verified".into())), ok.is_ok());
        }
        Err(e) => l.error("φ̂₀({0,1,2})", "hull certificate verifies", e),
    }
    match pathology_degree(&spec, 3, 3) {
        Ok(p) => {
            let status = if p.degree == rat(3, 2) {
                Status::Pass
            } else if p.degree == rat(4, 3) {
                Status::Flagged
            } else {
                Status::Fail
            };
            l.0.check("P(φ₀)", "3/2", q_fraction(&p.degree), status);
        }
        Err(e) => l.error("P(φ₀)", "3/2", e),
    }
}

fn arith() -> Arc<dyn PartitionScheme> {
    Arc::new(ArithV1)
}

fn el(s: &dyn PartitionScheme, n: u64, j: u64) -> u64 {
    s.element(n, j).expect("small indices")
}

fn ed_checks(l: &mut Ledger) {
    let s = arith();
    let triple = FinSet::from([el(s.as_ref(), 0, 0), el(s.as_ref(), 1, 0), el(s.as_ref(), 1, 1)]);
    let ed = ed_cover_spec(s.clone());
    let res = (|| -> Result<(), Box<dyn std::error::Error>> {
        let v = ed.eval(&triple)?;
        l.claim("ED φ(A)", format!("φ({triple}) = 2"), v.to_string(), v == ExtRat::from_int(2));
        let dels: Vec<ExtRat> = triple.iter().map(|y| ed.eval(&triple.without(y))).collect::<Result<_, _>>()?;
        let shown: Vec<String> = dels.iter().map(ToString::to_string).collect();
        l.claim("ED φ(A∖{y})", "1 for every y", shown.join(", "), dels.iter().all(|d| *d == ExtRat::from_int(1)));
        let c = integer_pathology_criterion(&ed, &triple)?;
        l.claim("ED criterion", "FIRED", verdict_string(&c), matches!(c, CriterionVerdict::Fired { .. }));
        let h = hat_phi(&ed, &triple)?;
        l.claim("ED φ̂(A)", "< 2, so P > 1", q(&h.value), h.value < int(2));
        let lit = ed_mazur_filtration(s.clone(), 30).eval(&triple)?;
        l.0.field("ed_literal_filtration_on_triple", lit.to_string());
        let vals: Vec<ExtRat> = (0..6).map(|n| ed_sup_representation(s.as_ref(), &s.block_prefix(n, n + 1))).collect();
        let shown: Vec<String> = vals.iter().map(ToString::to_string).collect();
        l.claim("ED-sup on [B_n]^{n+1}", "n+1 for n ≤ 5", shown.join(", "), vals.iter().enumerate().all(|(n, v)| *v == ExtRat::from_int(n as u64 + 1)));
        let p = pathology_degree(&SubmeasureSpec::construction(EdSup(s.clone())), 10, 6)?;
        l.claim("P(ED-sup)", "1/1 on universe 10, sets ≤ 6", q_fraction(&p.degree), p.degree == int(1));
        Ok(())
    })();
    if let Err(e) = res {
        l.error("ED", "example values", e);
    }
}

fn fin_times_empty_checks(l: &mut Ledger) {
    let s = arith();
    let filt = fin_times_empty_filtration(s.clone(), 1 << 20);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut bad = None;
    for _ in 0..100 {
        let a: FinSet = (0..rng.gen_range(0..10)).map(|_| rng.gen_range(0..500u64)).collect();
        let closed = phi_fin_times_empty(s.as_ref(), &a);
        match filt.eval(&a) {
            Ok(v) if v == closed => {}
            other => bad = Some(format!("{a}: closed form {closed}, filtration {other:?}")),
        }
    }
    l.claim("fin×∅ representations", "closed form = filtration on 100 random sets", bad.clone().unwrap_or("agree".into()), bad.is_none());

    let psi = SubmeasureSpec::construction(subm_core::ideals::BlockCover(s.clone()));
    let mut bad = None;
    for _ in 0..50 {
        let size = rng.gen_range(1..=6);
        let mut blocks: Vec<u64> = (0..20).collect();
        let mut sel = FinSet::new();
        for _ in 0..size {
            let n = blocks.swap_remove(rng.gen_range(0..blocks.len()));
            sel.insert(el(s.as_ref(), n, rng.gen_range(0..40)));
        }
        let card = ExtRat::from_int(sel.len() as u64);
        let direct = psi_block_cover(s.as_ref(), &sel);
        let hull = hat_phi(&psi, &sel).map(|h| h.value);
        if !is_partial_selector(s.as_ref(), &sel) || direct != card || hull.as_ref().ok() != card.finite() {
            bad = Some(format!("{sel}: ψ = {direct}, φ̂ = {hull:?}"));
        }
    }
    l.claim("ψ on partial selectors", "ψ(S) = |S| = φ̂(S) for 50 random S", bad.clone().unwrap_or("agree".into()), bad.is_none());
}

fn random_measure(rng: &mut ChaCha8Rng, universe: u64) -> PointMeasure {
    let mut w = Vec::new();
    for k in 0..universe {
        if rng.gen_bool(0.6) {
            w.push((k, rat(rng.gen_range(0..5), rng.gen_range(1..4))));
        }
    }
    PointMeasure::from_weights(w).expect("nonnegative")
}

fn preservation_checks(l: &mut Ledger) {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut bad = None;
    for i in 0..10 {
        let sup = |rng: &mut ChaCha8Rng| SubmeasureSpec::SupMeasures((0..rng.gen_range(1..4)).map(|_| random_measure(rng, 8)).collect());
        let spec = if i % 2 == 0 {
            sup_combine(vec![sup(&mut rng), sup(&mut rng)]).expect("nonempty")
        } else {
            let cut = rng.gen_range(1..7u64);
            sum_combine(vec![
                SumPart { spec: sup(&mut rng), block: Block::pred(move |m| m < cut) },
                SumPart { spec: sup(&mut rng), block: Block::pred(move |m| m >= cut) },
            ])
            .expect("nonempty")
        };
        match pathology_degree(&spec, 6, 4) {
            Ok(p) if p.degree == int(1) => {}
            Ok(p) => bad = Some(format!("instance {i}: degree {}", q_fraction(&p.degree))),
            Err(e) => bad = Some(format!("instance {i}: {e}")),
        }
    }
    l.claim("non-pathology preserved", "P = 1/1 for sups and sums of measures", bad.clone().unwrap_or("1/1 on 10 instances".into()), bad.is_none());
}

/// `max_{G ⊆ F} ‖Σ_{n∈G} x_n‖` by enumeration.
fn phi_x_brute(x: &[SparseVec], f: &[usize]) -> Rational {
    (0..1u64 << f.len())
        .map(|m| f.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).fold(SparseVec::new(), |acc, (_, &n)| acc.add(&x[n])).norm())
        .max()
        .unwrap_or_else(|| int(0))
}

fn vector_checks(l: &mut Ledger) {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut bad = None;
    for _ in 0..20 {
        let mut x = Vec::new();
        for _ in 0..10 {
            let mut e = Vec::new();
            for k in 0..4u64 {
                if rng.gen_bool(0.5) {
                    e.push((k, rat(rng.gen_range(-4..5), rng.gen_range(1..4))));
                }
            }
            x.push(SparseVec::from_entries(e));
        }
        let f: Vec<usize> = (0..10).filter(|_| rng.gen_bool(0.7)).collect();
        let set: FinSet = f.iter().map(|&n| n as u64).collect();
        let spec = SubmeasureSpec::Vectors(VectorSeq::explicit(x.clone()));
        let brute = phi_x_brute(&x, &f);
        match spec.eval(&set) {
            Ok(v) if v == ExtRat::Finite(brute.clone()) => {}
            other => bad = Some(format!("{set}: closed form {other:?}, enumeration {brute}")),
        }
    }
    l.claim("φ_x closed form", "equals subset enumeration on 20 signed instances", bad.clone().unwrap_or("agree".into()), bad.is_none());

    let s = arith();
    let bm = SubmeasureSpec::Vectors(block_multiples(s.clone()));
    let on_blocks: Vec<String> = (1..=5).map(|m| bm.eval(&s.block_prefix(m, 4)).map_or_else(|e| e.to_string(), |v| v.to_string())).collect();
    l.claim("m·e_n on F ⊆ B_m", "m for m = 1..5", on_blocks.join(", "), on_blocks.iter().enumerate().all(|(i, v)| *v == (i + 1).to_string()));
    let diag: Vec<u64> = diagonal_stream(s.clone()).take(10).collect();
    let on_diag: Vec<String> = (1..=10).map(|k| bm.eval(&diag[..k].iter().copied().collect()).map_or_else(|e| e.to_string(), |v| v.to_string())).collect();
    l.claim("m·e_n on diagonal prefixes", "k-1 on the first k selector points", on_diag.join(", "), on_diag.iter().enumerate().all(|(k, v)| *v == k.to_string()));
    let mut exceeded = Vec::new();
    for m in [1u64, 10, 100] {
        match bounded_on_prefix(&bm, &mut diagonal_stream(s.clone()), &ExtRat::from_int(m), 1000) {
            Ok(Boundedness::Exceeded { value, .. }) => exceeded.push(format!("M={m}: {value}")),
            other => exceeded.push(format!("M={m}: {other:?}")),
        }
    }
    l.claim("diagonal unbounded", "Exceeded for M = 1, 10, 100", exceeded.join(", "), exceeded.iter().all(|e| !e.contains("Bounded") && !e.contains("Inconclusive")));
}

fn ejemadecuada_checks(l: &mut Ledger) {
    let a = ejemadecuada_generator(EjemVariant::A);
    let mut bad = None;
    for x in 0..3000u64 {
        let (n, _) = a.scheme.locate(x);
        match a.spec.singleton(x) {
            Ok(v) if v == ExtRat::Finite(pow2_inv(n)) => {}
            other => bad = Some(format!("φ{{{x}}} = {other:?}, block {n}")),
        }
    }
    l.claim("variant (a) singletons", "φ{x} = 2^-n on B_n", bad.clone().unwrap_or("holds on [0, 3000)".into()), bad.is_none());
    let schedule: Vec<Rational> = (0..=10).map(pow2_inv).collect();
    match has_property_a(&a.spec, &schedule) {
        PropertyA::Holds { bounds } => {
            let ok = bounds.iter().enumerate().all(|(e, (_, v, n))| n.map_or(*v == int(0), |n| n <= e as u64 + 1));
            let shown: Vec<String> = bounds.iter().map(|(eps, v, n)| match n {
                    Some(n) => format!("ε={}: φ(M_ε) = {} ⊆ B_≤{n}", q(eps), q(v)),
                    None => format!("ε={}: M_ε = ∅", q(eps)),
                }).collect();
            l.claim("variant (a) property A", "HOLDS, M_ε ⊆ B_0 ∪ … ∪ B_N", shown.join("; "), ok);
        }
        other => l.claim("variant (a) property A", "HOLDS", format!("{other:?}"), false),
    }
    for f in a.check_facts(6, 5000) {
        l.claim(&format!("variant (a) fact {}", f.fact), f.statement, f.detail, f.holds);
    }

    let b = ejemadecuada_generator(EjemVariant::B);
    let mut bad = None;
    for n in 0..5u64 {
        for k in 0..6u64 {
            let x = b.scheme.sub_block_min(n, k).expect("small sub-block");
            let want = Rational::new(1.into(), (num_bigint::BigInt::from(1u8) << n) + k);
            if b.spec.singleton(x).ok() != Some(ExtRat::Finite(want.clone())) {
                bad = Some(format!("B_{n}^{k}: want {}", q(&want)));
            }
        }
    }
    l.claim("variant (b) point values", "1/(2^n+k) on B_n^k", bad.clone().unwrap_or("exact for n < 5, k < 6".into()), bad.is_none());

    const PREFIX: u64 = 10_000;
    match sum_exh_diagnostics(&b.spec, &mut b.sub_block_selector(0), PREFIX) {
        Ok(d) => {
            let sums_grow = d.partial_sums.windows(2).all(|w| w[0].1 < w[1].1);
            let last_sum = d.partial_sums.last().map(|p| p.1.clone()).unwrap_or_else(ExtRat::zero);
            let tails_ok = d.tails.iter().all(|(m, v)| if *m < PREFIX { *v == ExtRat::Finite(rat(1, *m as i64 + 1)) } else { v.is_zero() });
            let last_tail = d.tails.iter().rev().nth(1).map(|t| format!("φ(tail from {}) = {}", t.0, t.1)).unwrap_or_default();
            l.claim(
                "variant (b) Exh∖Sum",
                "partial sums diverge while tails 1/(m+1) shrink",
                format!("Σ over {PREFIX} = {}; {last_tail}", last_sum.finite().map_or("inf".into(), |r| subm_core::rational::to_decimal(r, 4))),
                sums_grow && tails_ok && last_sum > ExtRat::from_int(9) && !d.exhausted,
            );
        }
        Err(e) => l.error("variant (b) Exh∖Sum", "diverging sums, shrinking tails", e),
    }
}

fn selector_checks(l: &mut Ledger) {
    let a = ejemadecuada_generator(EjemVariant::A);
    match property_a_selector(&a.spec, &mut SetStream::naturals(), 10, 10_000) {
        Ok(c) => l.claim("property-A selector", "verified, M ≤ 2", format!("M = {}, φ(B) = {}, verified {}", q(&c.bound), q(&c.value), c.verified), c.verified && c.bound <= int(2)),
        Err(e) => l.error("property-A selector", "verified, M ≤ 2", e),
    }
    match c0like_selector(&instances::c0like_blocks(), &mut SetStream::new((1u64..).map(|n| n * n)), 20, 10_000) {
        Ok(c) => l.claim(
            "c0like selector",
            "|H| = 20, verified M = 2",
            format!("|H| = {}, M = {}, verified {}", c.selected.len(), q(&c.bound), c.verified),
            c.verified && c.selected.len() == 20 && c.bound == int(2),
        ),
        Err(e) => l.error("c0like selector", "|H| = 20, verified M = 2", e),
    }
    match schreier_selector(&instances::basis(), 0, &mut SetStream::naturals(), 12, 200) {
        Ok(c) => {
            let qv = c.selected.first().unwrap_or(0);
            l.claim("Schreier selector", "verified, M = q+2", format!("q = {qv}, M = {}, verified {}", q(&c.bound), c.verified), c.verified && c.bound == int(qv + 2));
        }
        Err(e) => l.error("Schreier selector", "verified, M = q+2", e),
    }
    let mut s = SetStream::naturals().with_modulus(instances::perturbed_basis_modulus());
    let x = instances::perturbed_basis();
    match bp_select(&x, &mut s, &int(1), BP_LEN, 100_000, BpMode::Certified) {
        Ok((sel, c)) => {
            let sup = sel.b.iter().map(|&n| x.norm(n)).max().unwrap_or_else(|| int(0));
            l.claim(
                "block-sequence selector",
                format!("{BP_LEN} blocks, ledger verified, M = sup‖x_n‖ + α/2"),
                format!("{} blocks, {} inequalities, M = {}", sel.b.len(), c.evidence.len(), q(&c.bound)),
                c.verified && sel.b.len() == BP_LEN && c.bound == sup + rat(1, 2),
            );
        }
        Err(e) => l.error("block-sequence selector", "verified", e),
    }
    let mut s = SetStream::naturals().with_modulus(instances::basis_modulus());
    let x = instances::basis();
    match bp_select(&x, &mut s, &int(1), 50, 10_000, BpMode::Certified) {
        Ok((sel, c)) => {
            let exact = sel.b.iter().zip(&sel.blocks).all(|(&n, y)| x.get(n) == *y);
            l.claim("block-sequence on basis", "zero perturbation, M = 3/2", format!("unperturbed {exact}, M = {}", q(&c.bound)), c.verified && exact && c.bound == rat(3, 2));
        }
        Err(e) => l.error("block-sequence on basis", "M = 3/2", e),
    }
    let x = block_multiples(arith());
    match tall_selector(&x, &mut diagonal_stream(arith()), 10, 400) {
        Err(e @ SelectorError::Unbounded { .. }) => l.claim("tall on diagonal", "no certificate (not weakly null)", e.to_string(), true),
        Ok(c) => l.claim("tall on diagonal", "no certificate", format!("certificate with M = {}", q(&c.bound)), false),
        Err(e) => l.claim("tall on diagonal", "no certificate (not weakly null)", e.to_string(), false),
    }
}

fn ramsey_checks(l: &mut Ledger) {
    let cases: [(&str, Coloring, usize); 2] = [("Sierpiński", sierpinski_coloring(), 6), ("partition", partition_coloring(arith()), 8)];
    for (name, c, len) in cases {
        match ramsey_extract(&c, &mut SetStream::naturals(), len, 4096) {
            Ok((col, h)) => l.claim(&format!("Ramsey on {name}"), format!("homogeneous {len}-set"), format!("{h} color {col}"), h.len() == len && c.is_homogeneous(&h, col)),
            Err(e) => l.error(&format!("Ramsey on {name}"), "homogeneous set", e),
        }
    }
    let parts = sierpinski_parts(4096);
    let sc = sierpinski_coloring();
    let xm: Vec<u64> = parts.iter().filter(|p| p.1 == 1).map(|p| p.0).take(6).collect();
    let xs: FinSet = xm.iter().copied().collect();
    l.claim("Sierpiński X_1", "0-homogeneous", format!("{xs}"), xs.len() >= 3 && sc.is_homogeneous(&xs, 0));

    let pc = partition_coloring(arith());
    let a = FinSet::range(8);
    match hom_cover_number(&a, &pc) {
        Ok(v) => {
            // blocks meeting {0..7} are B_0..B_3: four pieces, or selectors of size ≤ 4
            let pieces = a.iter().map(|m| ArithV1.block_of(m)).collect::<std::collections::BTreeSet<_>>().len() as u64;
            let largest = a.iter().map(|m| ArithV1.block_of(m)).fold(std::collections::BTreeMap::<u64, u64>::new(), |mut c, b| {
                *c.entry(b).or_default() += 1;
                c
            });
            let lower = *largest.values().max().unwrap_or(&0);
            l.claim("hom-cover of {0..7}", format!("between {lower} and {pieces}"), v.to_string(), lower <= v && v <= pieces);
        }
        Err(e) => l.error("hom-cover of {0..7}", "finite", e),
    }
    let ic = partition_coloring(Arc::new(Intervals));
    match favors_witness(&ic, 1, 4, &FinSet::range(6), &mut SetStream::naturals(), 64) {
        Ok(w) => l.claim("favoring witness", "{6,7,8,9}", w.to_string(), w == FinSet::from([6, 7, 8, 9])),
        Err(e) => l.error("favoring witness", "{6,7,8,9}", e),
    }
}

fn metric_checks(l: &mut Ledger) {
    let spec = SubmeasureSpec::Table(phi0_table());
    let pts = [0u64, 1, 2];
    let sets: Vec<FinSet> = (0..8).map(|m| FinSet::from_mask(&pts, m)).collect();
    let d = |a: &FinSet, b: &FinSet| symdiff_metric(&spec, a, b).expect("table");
    let mut bad = None;
    for a in &sets {
        if !d(a, a).is_zero() {
            bad = Some(format!("d({a},{a}) ≠ 0"));
        }
        for b in &sets {
            if d(a, b) != d(b, a) {
                bad = Some(format!("asymmetric at {a}, {b}"));
            }
            for c in &sets {
                if d(a, c) > d(a, b) + d(b, c) {
                    bad = Some(format!("triangle fails at {a}, {b}, {c}"));
                }
                if d(&a.symmetric_difference(c), &b.symmetric_difference(c)) != d(a, b) {
                    bad = Some(format!("not invariant at {a}, {b}, {c}"));
                }
            }
        }
    }
    l.claim("symmetric-difference metric", "pseudometric, translation invariant on 2^{0,1,2}", bad.clone().unwrap_or("512 triples".into()), bad.is_none());
}
