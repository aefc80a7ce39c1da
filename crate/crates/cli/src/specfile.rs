//! JSON spec files.
//!
//! Every document carries a `kind`:
//!
//! ```json
//! {"kind": "table", "universe": 3, "values": [0, 1, 1, 1, 1, 1, 1, 2]}
//! {"kind": "sup_measures", "measures": [[[0, "1/2"], [3, 1]]]}
//! {"kind": "vector_seq", "vectors": [[[0, 1]], [[1, "-1/2"]]]}
//! {"kind": "vector_seq", "generator": "perturbed-basis"}
//! {"kind": "filtration", "family": "fin-times-empty", "scheme": "arith-v1"}
//! {"kind": "cover", "base": "ed", "scheme": "arith-v1"}
//! {"kind": "cover", "sets": [[0, 1], [1, 2]]}
//! {"kind": "named", "ideal": "ED", "scheme": "arith-v1"}
//! ```
//!
//! Rationals are integers or strings `"p/q"`; `"inf"` marks an infinite table value.

use std::sync::Arc;

use serde::Deserialize;
use subm_core::ideals::{
    block_multiples, delta_stream, diagonal_stream, ed_base, ed_cover_spec, ed_fin, ed_mazur_filtration, ejemadecuada_generator, fin_times_empty_filtration,
    is_partial_selector, is_within_piece, scheme_by_name, BlockCover, EdPsi, EdSup, EjemVariant, FinTimesEmpty, PartitionScheme, WeightedCount,
};
use subm_core::selectors::instances;
use subm_core::spec::{validate_table, CoverSpec, TableSpec};
use subm_core::stream::ColumnModulus;
use subm_core::{ExtRat, FinSet, PointMeasure, SetStream, SparseVec, SubmeasureSpec, VectorSeq};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(u64),
    Neg(i64),
    Str(String),
}

impl Num {
    fn ext(&self) -> Result<ExtRat, CliError> {
        match self {
            Num::Int(n) => Ok(ExtRat::from_int(*n)),
            Num::Neg(n) => Err(CliError::Schema(format!("negative value {n}"))),
            Num::Str(s) => s.parse().map_err(|e| CliError::Schema(format!("{e}"))),
        }
    }

    fn rational(&self) -> Result<subm_core::Rational, CliError> {
        match self {
            Num::Int(n) => Ok(subm_core::rational::int(*n)),
            Num::Neg(n) => Ok(subm_core::Rational::from_integer((*n).into())),
            Num::Str(s) => subm_core::rational::parse_rational(s).map_err(|e| CliError::Schema(format!("{e}"))),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpecFile {
    Table {
        universe: u32,
        values: Vec<Num>,
    },
    SupMeasures {
        measures: Vec<Vec<(u64, Num)>>,
    },
    VectorSeq {
        #[serde(default)]
        vectors: Option<Vec<Vec<(u64, Num)>>>,
        #[serde(default)]
        generator: Option<String>,
    },
    Filtration {
        family: String,
        #[serde(default)]
        scheme: Option<String>,
        #[serde(default)]
        max_level: Option<u64>,
    },
    Cover {
        #[serde(default)]
        base: Option<String>,
        #[serde(default)]
        scheme: Option<String>,
        #[serde(default)]
        sets: Option<Vec<Vec<u64>>>,
        #[serde(default)]
        cap: Option<usize>,
    },
    Named {
        ideal: String,
        #[serde(default)]
        scheme: Option<String>,
    },
}

/// A parsed spec with what the commands need to know about it.
#[derive(Clone)]
pub struct LoadedSpec {
    pub spec: SubmeasureSpec,
    pub label: String,
    /// Universe of a table spec.
    pub universe: Option<u64>,
    /// The underlying sequence of a vector spec, with its column modulus when known.
    pub vectors: Option<(VectorSeq, Option<ColumnModulus>)>,
    pub bytes: Vec<u8>,
}

fn scheme(name: &Option<String>) -> Result<Arc<dyn PartitionScheme>, CliError> {
    let n = name.as_deref().unwrap_or("arith-v1");
    scheme_by_name(n).ok_or_else(|| CliError::Schema(format!("unknown partition scheme {n:?} (known: arith-v1, intervals)")))
}

fn sparse(entries: &[(u64, Num)]) -> Result<SparseVec, CliError> {
    Ok(SparseVec::from_entries(entries.iter().map(|(k, v)| Ok((*k, v.rational()?))).collect::<Result<Vec<_>, CliError>>()?))
}

/// Parses and validates a spec document.
pub fn load_spec_str(text: &str) -> Result<LoadedSpec, CliError> {
    load(text, true)
}

/// Parses a spec without checking table axioms, so callers can report violations themselves.
pub fn load_spec_str_unchecked(text: &str) -> Result<LoadedSpec, CliError> {
    load(text, false)
}

fn load(text: &str, check_axioms: bool) -> Result<LoadedSpec, CliError> {
    let doc: SpecFile = serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
    let mut out = LoadedSpec { spec: SubmeasureSpec::SupMeasures(Vec::new()), label: String::new(), universe: None, vectors: None, bytes: text.as_bytes().to_vec() };
    match doc {
        SpecFile::Table { universe, values } => {
            let vals = values.iter().map(Num::ext).collect::<Result<Vec<_>, _>>()?;
            let t = TableSpec::new(universe, vals).map_err(|e| CliError::Schema(e.to_string()))?;
            let bad = if check_axioms { validate_table(&t) } else { Vec::new() };
            if let Some(v) = bad.first() {
                return Err(CliError::Schema(format!("table is not a submeasure: {v} ({} violations)", bad.len())));
            }
            out.label = format!("table on {{0..{}}}", universe.saturating_sub(1));
            out.universe = Some(universe as u64);
            out.spec = SubmeasureSpec::Table(t);
        }
        SpecFile::SupMeasures { measures } => {
            let ms = measures
                .iter()
                .map(|m| {
                    let w = m.iter().map(|(k, v)| Ok((*k, v.rational()?))).collect::<Result<Vec<_>, CliError>>()?;
                    PointMeasure::from_weights(w).ok_or_else(|| CliError::Schema("measure weights must be nonnegative".into()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            out.label = format!("sup of {} measures", ms.len());
            out.spec = SubmeasureSpec::SupMeasures(ms);
        }
        SpecFile::VectorSeq { vectors, generator } => {
            let (x, modulus, label) = match (vectors, generator) {
                (Some(vs), None) => {
                    let vs = vs.iter().map(|v| sparse(v)).collect::<Result<Vec<_>, _>>()?;
                    let n = vs.len();
                    (VectorSeq::explicit(vs), None, format!("{n} explicit vectors"))
                }
                (None, Some(g)) => {
                    let (x, m) = instances::by_name(&g).ok_or_else(|| CliError::Schema(format!("unknown generator {g:?} (known: {})", instances::NAMES.join(", "))))?;
                    (x, m, format!("generator {g}"))
                }
                _ => return Err(CliError::Schema("vector_seq needs exactly one of `vectors` and `generator`".into())),
            };
            out.label = label;
            out.spec = SubmeasureSpec::Vectors(x.clone());
            out.vectors = Some((x, modulus));
        }
        SpecFile::Filtration { family, scheme: s, max_level } => {
            let sch = scheme(&s)?;
            let max = max_level.unwrap_or(1 << 20);
            out.spec = match family.as_str() {
                "fin-times-empty" => fin_times_empty_filtration(sch.clone(), max),
                "ed-mazur" => ed_mazur_filtration(sch.clone(), max.min(20)),
                other => return Err(CliError::Schema(format!("unknown filtration family {other:?} (known: fin-times-empty, ed-mazur)"))),
            };
            out.label = format!("filtration {family} over {}", sch.name());
        }
        SpecFile::Cover { base, scheme: s, sets, cap } => {
            let cover = match (base, sets) {
                (Some(b), None) => {
                    let sch = scheme(&s)?;
                    out.label = format!("cover by {b} over {}", sch.name());
                    match b.as_str() {
                        "ed" => CoverSpec::new(move |f| ed_base(sch.as_ref(), f)),
                        "pieces" => CoverSpec::new(move |f| is_within_piece(sch.as_ref(), f)),
                        "selectors" => CoverSpec::new(move |f| is_partial_selector(sch.as_ref(), f)),
                        other => return Err(CliError::Schema(format!("unknown cover base {other:?} (known: ed, pieces, selectors)"))),
                    }
                }
                (None, Some(sets)) => {
                    let sets: Vec<FinSet> = sets.into_iter().map(FinSet::from_unsorted).collect();
                    out.label = format!("cover by subsets of {} listed sets", sets.len());
                    CoverSpec::new(move |f| f.len() <= 1 || sets.iter().any(|s| f.is_subset(s)))
                }
                _ => return Err(CliError::Schema("cover needs exactly one of `base` and `sets`".into())),
            };
            out.spec = SubmeasureSpec::Cover(match cap {
                Some(c) => cover.with_cap(c),
                None => cover,
            });
        }
        SpecFile::Named { ideal, scheme: s } => {
            let sch = scheme(&s)?;
            out.spec = match ideal.as_str() {
                "ED" => ed_cover_spec(sch.clone()),
                "ED_fin" => ed_fin(sch.clone(), ed_cover_spec(sch.clone())),
                "ED-sup" => SubmeasureSpec::construction(EdSup(sch.clone())),
                "ED-psi" => SubmeasureSpec::construction(EdPsi(sch.clone())),
                "fin-times-empty" => SubmeasureSpec::construction(FinTimesEmpty(sch.clone())),
                "block-cover" => SubmeasureSpec::construction(BlockCover(sch.clone())),
                "ejemadecuada-a" => ejemadecuada_generator(EjemVariant::A).spec,
                "ejemadecuada-b" => ejemadecuada_generator(EjemVariant::B).spec,
                "summable-harmonic" => SubmeasureSpec::construction(WeightedCount::harmonic()),
                "block-multiples" => {
                    let x = block_multiples(sch.clone());
                    out.vectors = Some((x.clone(), None));
                    SubmeasureSpec::Vectors(x)
                }
                other => {
                    return Err(CliError::Schema(format!(
                        "unknown ideal {other:?} (known: ED, ED_fin, ED-sup, ED-psi, fin-times-empty, block-cover, ejemadecuada-a, ejemadecuada-b, summable-harmonic, block-multiples)"
                    )))
                }
            };
            out.label = format!("{ideal} over {}", sch.name());
        }
    }
    Ok(out)
}

pub fn load_spec_file(path: &str) -> Result<LoadedSpec, CliError> {
    load_spec_str(&read(path)?)
}

pub fn load_spec_file_unchecked(path: &str) -> Result<LoadedSpec, CliError> {
    load_spec_str_unchecked(&read(path)?)
}

fn read(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })
}

/// Parses `"0,1,2"` (braces and spaces allowed; empty means `∅`).
pub fn parse_set(s: &str) -> Result<FinSet, CliError> {
    let t = s.trim().trim_start_matches('{').trim_end_matches('}');
    t.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<u64>().map_err(|_| CliError::Usage(format!("bad set element {p:?}"))))
        .collect()
}

/// Parses a stream descriptor.
///
/// `naturals`, `from:N`, `squares`, `set:a,b,c`, `diagonal`, `delta`, `block:N`,
/// `low-blocks:N` (all of `B_0 ∪ … ∪ B_N`), `subblocks-a:N` and `subblocks-b:N`
/// (least element of each `B_N^k`). Blocks use `arith-v1`.
pub fn parse_stream(s: &str) -> Result<SetStream, CliError> {
    let arith = || scheme_by_name("arith-v1").expect("built in");
    let (head, arg) = s.split_once(':').unwrap_or((s, ""));
    let num = || arg.trim().parse::<u64>().map_err(|_| CliError::Usage(format!("stream {head} needs a number, got {arg:?}")));
    Ok(match head {
        "naturals" => SetStream::naturals(),
        "from" => SetStream::from(num()?),
        "squares" => SetStream::new((1u64..).map(|n| n * n)),
        "set" => SetStream::finite(&parse_set(arg)?),
        "diagonal" => diagonal_stream(arith()),
        "delta" => delta_stream(arith()),
        "block" => subm_core::ideals::block_stream(arith(), num()?),
        "low-blocks" => {
            let n = num()?;
            let sch = arith();
            SetStream::filtered(move |m| sch.block_of(m) <= n)
        }
        "subblocks-a" => ejemadecuada_generator(EjemVariant::A).sub_block_selector(num()?),
        "subblocks-b" => ejemadecuada_generator(EjemVariant::B).sub_block_selector(num()?),
        other => return Err(CliError::Usage(format!("unknown stream {other:?}"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_kind() {
        let docs = [
            r#"{"kind":"table","universe":3,"values":[0,1,1,1,1,1,1,2]}"#,
            r#"{"kind":"sup_measures","measures":[[[0,"1/2"],[3,1]]]}"#,
            r#"{"kind":"vector_seq","vectors":[[[0,1]],[[1,"-1/2"]]]}"#,
            r#"{"kind":"vector_seq","generator":"basis"}"#,
            r#"{"kind":"filtration","family":"fin-times-empty","scheme":"arith-v1"}"#,
            r#"{"kind":"cover","base":"ed"}"#,
            r#"{"kind":"cover","sets":[[0,1],[1,2]],"cap":10}"#,
            r#"{"kind":"named","ideal":"ED","scheme":"intervals"}"#,
        ];
        for d in docs {
            load_spec_str(d).unwrap_or_else(|e| panic!("{d}: {e}"));
        }
        let t = load_spec_str(docs[0]).unwrap();
        assert_eq!(t.spec.eval(&FinSet::from([0, 1, 2])).unwrap(), ExtRat::from_int(2));
        let c = load_spec_str(docs[6]).unwrap();
        assert_eq!(c.spec.eval(&FinSet::from([0, 1, 2])).unwrap(), ExtRat::from_int(2));
    }

    #[test]
    fn rejects_bad_documents() {
        for d in [
            r#"{"kind":"table","universe":2,"values":[0,1,1,2],"extra":1}"#,
            r#"{"kind":"table","universe":2,"values":[0,1,1]}"#,
            r#"{"kind":"table","universe":2,"values":[0,2,1,1]}"#,
            r#"{"kind":"table","universe":1,"values":[0,"-1"]}"#,
            r#"{"kind":"mystery"}"#,
            r#"{"kind":"vector_seq"}"#,
            r#"{"kind":"named","ideal":"ED","scheme":"nope"}"#,
            r#"{"kind":"sup_measures","measures":[[[0,"1/0"]]]}"#,
        ] {
            assert!(matches!(load_spec_str(d), Err(CliError::Schema(_))), "{d}");
        }
        let broken = r#"{"kind":"table","universe":2,"values":[0,2,1,1]}"#;
        assert!(load_spec_str_unchecked(broken).is_ok());
    }

    #[test]
    fn sets_and_streams() {
        assert_eq!(parse_set("").unwrap(), FinSet::new());
        assert_eq!(parse_set("{2, 0,1}").unwrap(), FinSet::from([0, 1, 2]));
        assert!(parse_set("1,x").is_err());
        assert_eq!(parse_stream("squares").unwrap().take(3).collect::<Vec<_>>(), vec![1, 4, 9]);
        assert_eq!(parse_stream("block:1").unwrap().take(3).collect::<Vec<_>>(), vec![1, 4, 8]);
        assert!(parse_stream("block").is_err());
    }
}
