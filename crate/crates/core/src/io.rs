//! JSON documents for lattice expansions, frames and morphisms.
//!
//! Documents refer to each other by path, relative to the directory of the
//! referring document. Element and point names are the only identifiers
//! that appear on disk.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canonical::CanonicalFrame;
use crate::morphism::FrameMorphism;
use crate::order::{DistributionType, Lattice, LatticeHomomorphism, Nle, NormalOperator, Sort};
use crate::polarity::SortedFrame;
use crate::relational::{FrameWithRelations, SortType, SortedRelation};
use crate::tuples;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {message}")]
    Read { path: String, message: String },
    #[error("{path}:{line}:{column}: syntax error: {message}")]
    Syntax {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Semantic { path: String, message: String },
}

fn semantic(path: &str, message: impl Into<String>) -> IoError {
    IoError::Semantic {
        path: path.to_string(),
        message: message.into(),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DtypeDoc {
    pub inputs: Vec<String>,
    pub output: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub args: Vec<String>,
    pub value: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorDoc {
    pub name: String,
    pub dtype: DtypeDoc,
    pub table: Vec<EntryDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NleDoc {
    pub name: String,
    pub elements: Vec<String>,
    pub leq: Vec<[String; 2]>,
    #[serde(default)]
    pub operators: Vec<OperatorDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SortDoc {
    pub output: String,
    pub inputs: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationDoc {
    pub name: String,
    pub sort: SortDoc,
    /// `[w, u_1, …, u_n]` for each `w R u⃗`.
    pub tuples: Vec<Vec<String>>,
}

/// Which lattice element generates each point of a canonical frame.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    #[serde(rename = "X")]
    pub x: BTreeMap<String, String>,
    #[serde(rename = "Y")]
    pub y: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameDoc {
    pub name: String,
    #[serde(rename = "X")]
    pub x: Vec<String>,
    #[serde(rename = "Y")]
    pub y: Vec<String>,
    /// The pairs `x ⊥ y`.
    pub gal: Vec<[String; 2]>,
    #[serde(default)]
    pub relations: Vec<RelationDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum MorphismDoc {
    #[serde(rename = "lattice-hom")]
    LatticeHom {
        source: String,
        target: String,
        map: Vec<[String; 2]>,
    },
    #[serde(rename = "frame-morphism")]
    FrameMorphism {
        source_frame: String,
        target_frame: String,
        p: Vec<[String; 2]>,
        q: Vec<[String; 2]>,
    },
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, path: &str) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|e| match e.classify() {
        serde_json::error::Category::Data => semantic(path, e.to_string()),
        _ => IoError::Syntax {
            path: path.to_string(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        },
    })
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|e| IoError::Read {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn sort_tag(path: &str, tag: &str) -> Result<Sort, IoError> {
    Sort::from_tag(tag).ok_or_else(|| semantic(path, format!("unknown sort tag `{tag}` (expected \"1\" or \"d\")")))
}

fn index_map(names: &[String]) -> HashMap<&str, usize> {
    names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect()
}

// ---------------------------------------------------------------------------
// Lattice expansions

pub fn nle_from_doc(doc: &NleDoc, path: &str) -> Result<Nle, IoError> {
    let idx = index_map(&doc.elements);
    let lookup = |n: &str| {
        idx.get(n)
            .copied()
            .ok_or_else(|| semantic(path, format!("unknown element `{n}`")))
    };
    let pairs = doc
        .leq
        .iter()
        .map(|[a, b]| Ok((lookup(a)?, lookup(b)?)))
        .collect::<Result<Vec<_>, IoError>>()?;
    let lattice = Lattice::from_order(doc.elements.clone(), &pairs).map_err(|e| semantic(path, e.to_string()))?;
    let n = lattice.len();
    let mut operators = Vec::new();
    for op in &doc.operators {
        if operators.iter().any(|f: &NormalOperator| f.name == op.name) {
            return Err(semantic(path, format!("operator `{}` defined twice", op.name)));
        }
        let inputs = op
            .dtype
            .inputs
            .iter()
            .map(|t| sort_tag(path, t))
            .collect::<Result<Vec<_>, _>>()?;
        let dtype = DistributionType::new(inputs, sort_tag(path, &op.dtype.output)?);
        let dims = vec![n; dtype.arity()];
        let mut table: Vec<Option<usize>> = vec![None; tuples::tuple_count(&dims)];
        for entry in &op.table {
            if entry.args.len() != dtype.arity() {
                return Err(semantic(
                    path,
                    format!("operator `{}`: entry {:?} has the wrong arity", op.name, entry.args),
                ));
            }
            let args = entry.args.iter().map(|a| lookup(a)).collect::<Result<Vec<_>, _>>()?;
            let slot = &mut table[tuples::encode(&dims, &args)];
            if slot.is_some() {
                return Err(semantic(
                    path,
                    format!("operator `{}`: duplicate entry {:?}", op.name, entry.args),
                ));
            }
            *slot = Some(lookup(&entry.value)?);
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    let missing: Vec<&str> = tuples::decode(&dims, i).iter().map(|&a| lattice.name(a)).collect();
                    semantic(path, format!("operator `{}`: no entry for {missing:?}", op.name))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        operators
            .push(NormalOperator::new(op.name.clone(), dtype, n, table).map_err(|e| semantic(path, e.to_string()))?);
    }
    Ok(Nle::new(doc.name.clone(), lattice, operators))
}

pub fn parse_nle(text: &str, path: &str) -> Result<Nle, IoError> {
    nle_from_doc(&parse_json(text, path)?, path)
}

pub fn nle_to_doc(nle: &Nle) -> NleDoc {
    let l = &nle.lattice;
    NleDoc {
        name: nle.name.clone(),
        elements: l.elements().to_vec(),
        leq: l
            .covers()
            .into_iter()
            .map(|(a, b)| [l.name(a).to_string(), l.name(b).to_string()])
            .collect(),
        operators: nle
            .operators
            .iter()
            .map(|f| OperatorDoc {
                name: f.name.clone(),
                dtype: DtypeDoc {
                    inputs: f.dtype.inputs.iter().map(|s| s.tag().to_string()).collect(),
                    output: f.dtype.output.tag().to_string(),
                },
                table: tuples::all_tuples(&f.dims())
                    .map(|t| EntryDoc {
                        args: t.iter().map(|&a| l.name(a).to_string()).collect(),
                        value: l.name(f.apply(&t)).to_string(),
                    })
                    .collect(),
            })
            .collect(),
    }
}

pub fn emit_nle(nle: &Nle) -> String {
    serde_json::to_string_pretty(&nle_to_doc(nle)).expect("serializable") + "\n"
}

// ---------------------------------------------------------------------------
// Frames

pub fn frame_from_doc(doc: &FrameDoc, path: &str) -> Result<FrameWithRelations, IoError> {
    for (names, what) in [(&doc.x, "X"), (&doc.y, "Y")] {
        let mut seen = std::collections::HashSet::new();
        if let Some(d) = names.iter().find(|n| !seen.insert(n.as_str())) {
            return Err(semantic(path, format!("point `{d}` listed twice in {what}")));
        }
    }
    let xi = index_map(&doc.x);
    let yi = index_map(&doc.y);
    let point = |s: Sort, n: &str| {
        let m = if s == Sort::One { &xi } else { &yi };
        m.get(n)
            .copied()
            .ok_or_else(|| semantic(path, format!("unknown point `{n}` of sort {}", s.tag())))
    };
    let gal = doc
        .gal
        .iter()
        .map(|[x, y]| Ok((point(Sort::One, x)?, point(Sort::Dual, y)?)))
        .collect::<Result<Vec<_>, IoError>>()?;
    let frame = SortedFrame::new(doc.name.clone(), doc.x.clone(), doc.y.clone(), &gal);
    let mut relations: Vec<SortedRelation> = Vec::new();
    for r in &doc.relations {
        if relations.iter().any(|s| s.name == r.name) {
            return Err(semantic(path, format!("relation `{}` defined twice", r.name)));
        }
        let inputs = r
            .sort
            .inputs
            .iter()
            .map(|t| sort_tag(path, t))
            .collect::<Result<Vec<_>, _>>()?;
        if inputs.is_empty() {
            return Err(semantic(
                path,
                format!("relation `{}` needs at least one input", r.name),
            ));
        }
        let sort = SortType::new(sort_tag(path, &r.sort.output)?, inputs);
        let mut ts = Vec::new();
        for t in &r.tuples {
            if t.len() != sort.arity() + 1 {
                return Err(semantic(
                    path,
                    format!("relation `{}`: tuple {t:?} has the wrong length", r.name),
                ));
            }
            let w = point(sort.output, &t[0])?;
            let args = t[1..]
                .iter()
                .zip(&sort.inputs)
                .map(|(n, &s)| point(s, n))
                .collect::<Result<Vec<_>, _>>()?;
            ts.push((w, args));
        }
        relations.push(
            SortedRelation::from_tuples(r.name.clone(), sort, &frame, &ts)
                .map_err(|e| semantic(path, e.to_string()))?,
        );
    }
    Ok(FrameWithRelations::new(frame, relations))
}

pub fn parse_frame(text: &str, path: &str) -> Result<FrameWithRelations, IoError> {
    frame_from_doc(&parse_json(text, path)?, path)
}

pub fn frame_to_doc(fr: &FrameWithRelations, provenance: Option<&CanonicalFrame>) -> FrameDoc {
    let f = &fr.frame;
    let name = |s: Sort, u: usize| f.point_name(s, u).to_string();
    FrameDoc {
        name: f.name.clone(),
        x: f.names(Sort::One).to_vec(),
        y: f.names(Sort::Dual).to_vec(),
        gal: f
            .gal_pairs()
            .into_iter()
            .map(|(x, y)| [name(Sort::One, x), name(Sort::Dual, y)])
            .collect(),
        relations: fr
            .relations
            .iter()
            .map(|r| RelationDoc {
                name: r.name.clone(),
                sort: SortDoc {
                    output: r.sort.output.tag().to_string(),
                    inputs: r.sort.inputs.iter().map(|s| s.tag().to_string()).collect(),
                },
                tuples: r
                    .tuples()
                    .into_iter()
                    .map(|(w, args)| {
                        std::iter::once(name(r.sort.output, w))
                            .chain(args.iter().zip(&r.sort.inputs).map(|(&u, &s)| name(s, u)))
                            .collect()
                    })
                    .collect(),
            })
            .collect(),
        provenance: provenance.map(|cf| {
            let l = &cf.nle.lattice;
            let side = |s: Sort| {
                (0..f.len(s))
                    .map(|u| (name(s, u), l.name(cf.generator(s, u)).to_string()))
                    .collect()
            };
            Provenance {
                x: side(Sort::One),
                y: side(Sort::Dual),
            }
        }),
    }
}

pub fn emit_frame(fr: &FrameWithRelations, provenance: Option<&CanonicalFrame>) -> String {
    serde_json::to_string_pretty(&frame_to_doc(fr, provenance)).expect("serializable") + "\n"
}

// ---------------------------------------------------------------------------
// Morphisms

#[derive(Clone, Debug)]
pub enum Morphism {
    Lattice(LatticeHomomorphism),
    Frame(FrameMorphism),
}

/// A loaded document together with every file it pulled in.
#[derive(Clone, Debug)]
pub struct Loaded<T> {
    pub value: T,
    pub files: Vec<(PathBuf, Vec<u8>)>,
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, IoError> {
    fs::read(path).map_err(|e| IoError::Read {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn text_of(path: &Path, bytes: &[u8]) -> Result<String, IoError> {
    String::from_utf8(bytes.to_vec()).map_err(|_| semantic(&path.display().to_string(), "not UTF-8"))
}

pub fn load_nle(path: &Path) -> Result<Loaded<Nle>, IoError> {
    let bytes = read_bytes(path)?;
    let value = parse_nle(&text_of(path, &bytes)?, &path.display().to_string())?;
    Ok(Loaded {
        value,
        files: vec![(path.to_path_buf(), bytes)],
    })
}

pub fn load_frame(path: &Path) -> Result<Loaded<FrameWithRelations>, IoError> {
    let bytes = read_bytes(path)?;
    let value = parse_frame(&text_of(path, &bytes)?, &path.display().to_string())?;
    Ok(Loaded {
        value,
        files: vec![(path.to_path_buf(), bytes)],
    })
}

fn pairs_to_map(
    pairs: &[[String; 2]],
    from: &[String],
    to: &[String],
    path: &str,
    what: &str,
) -> Result<Vec<usize>, IoError> {
    let fi = index_map(from);
    let ti = index_map(to);
    let mut map = vec![None; from.len()];
    for [a, b] in pairs {
        let i = *fi
            .get(a.as_str())
            .ok_or_else(|| semantic(path, format!("{what}: unknown source `{a}`")))?;
        let j = *ti
            .get(b.as_str())
            .ok_or_else(|| semantic(path, format!("{what}: unknown target `{b}`")))?;
        if map[i].replace(j).is_some() {
            return Err(semantic(path, format!("{what}: `{a}` mapped twice")));
        }
    }
    map.into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| semantic(path, format!("{what}: `{}` is not mapped", from[i]))))
        .collect()
}

pub fn load_morphism(path: &Path) -> Result<Loaded<Morphism>, IoError> {
    let bytes = read_bytes(path)?;
    let p = path.display().to_string();
    let doc: MorphismDoc = parse_json(&text_of(path, &bytes)?, &p)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut files = vec![(path.to_path_buf(), bytes)];
    let value = match doc {
        MorphismDoc::LatticeHom { source, target, map } => {
            let s = load_nle(&dir.join(source))?;
            let t = load_nle(&dir.join(target))?;
            let m = pairs_to_map(&map, s.value.lattice.elements(), t.value.lattice.elements(), &p, "map")?;
            files.extend(s.files);
            files.extend(t.files);
            Morphism::Lattice(LatticeHomomorphism::new(s.value, t.value, m).map_err(|e| semantic(&p, e.to_string()))?)
        }
        MorphismDoc::FrameMorphism {
            source_frame,
            target_frame,
            p: pp,
            q,
        } => {
            let s = load_frame(&dir.join(source_frame))?;
            let t = load_frame(&dir.join(target_frame))?;
            let (sf, tf) = (&s.value.frame, &t.value.frame);
            let pm = pairs_to_map(&pp, sf.names(Sort::One), tf.names(Sort::One), &p, "p")?;
            let qm = pairs_to_map(&q, sf.names(Sort::Dual), tf.names(Sort::Dual), &p, "q")?;
            files.extend(s.files);
            files.extend(t.files);
            Morphism::Frame(FrameMorphism::new(s.value, t.value, pm, qm).map_err(|e| semantic(&p, e.to_string()))?)
        }
    };
    Ok(Loaded { value, files })
}

pub fn frame_morphism_doc(m: &FrameMorphism, source_frame: &str, target_frame: &str) -> MorphismDoc {
    let (s, t) = (&m.source.frame, &m.target.frame);
    let pairs = |sort: Sort| {
        (0..s.len(sort))
            .map(|u| {
                [
                    s.point_name(sort, u).to_string(),
                    t.point_name(sort, m.apply(sort, u)).to_string(),
                ]
            })
            .collect()
    };
    MorphismDoc::FrameMorphism {
        source_frame: source_frame.to_string(),
        target_frame: target_frame.to_string(),
        p: pairs(Sort::One),
        q: pairs(Sort::Dual),
    }
}

pub fn lattice_hom_doc(h: &LatticeHomomorphism, source: &str, target: &str) -> MorphismDoc {
    let (s, t) = (&h.source.lattice, &h.target.lattice);
    MorphismDoc::LatticeHom {
        source: source.to_string(),
        target: target.to_string(),
        map: (0..s.len())
            .map(|a| [s.name(a).to_string(), t.name(h.apply(a)).to_string()])
            .collect(),
    }
}

pub fn emit_morphism(doc: &MorphismDoc) -> String {
    serde_json::to_string_pretty(doc).expect("serializable") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::canonical_frame;
    use crate::fixtures;

    #[test]
    fn nle_roundtrip() {
        for nle in fixtures::standard().into_iter().chain(fixtures::all_with_operators()) {
            let text = emit_nle(&nle);
            let back = parse_nle(&text, "mem").unwrap();
            assert_eq!(back, nle);
            assert_eq!(emit_nle(&back), text);
        }
    }

    #[test]
    fn frame_roundtrip_with_provenance() {
        let cf = canonical_frame(&fixtures::g3());
        let text = emit_frame(&cf.frame, Some(&cf));
        let back = parse_frame(&text, "mem").unwrap();
        assert_eq!(back, cf.frame);
        let doc: FrameDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(doc.provenance.unwrap().x["↑e"], "e");
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_nle("{\n  \"name\": \"x\",\n  oops\n}", "bad.json").unwrap_err();
        match err {
            IoError::Syntax { line, column, .. } => {
                assert_eq!(line, 3);
                assert!(column >= 3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn semantic_errors() {
        let not_lattice = r#"{"name":"v","elements":["0","a","b"],"leq":[["0","a"],["0","b"]]}"#;
        assert!(matches!(
            parse_nle(not_lattice, "v.json"),
            Err(IoError::Semantic { .. })
        ));
        let unknown = r#"{"name":"v","elements":["0"],"leq":[["0","z"]]}"#;
        assert!(parse_nle(unknown, "v.json").unwrap_err().to_string().contains("`z`"));
        let partial = r#"{"name":"c2","elements":["0","1"],"leq":[["0","1"]],
            "operators":[{"name":"f","dtype":{"inputs":["1"],"output":"1"},"table":[{"args":["0"],"value":"0"}]}]}"#;
        assert!(parse_nle(partial, "p.json")
            .unwrap_err()
            .to_string()
            .contains("no entry"));
        let tag = r#"{"name":"c2","elements":["0","1"],"leq":[["0","1"]],
            "operators":[{"name":"f","dtype":{"inputs":["x"],"output":"1"},"table":[]}]}"#;
        assert!(parse_nle(tag, "t.json").unwrap_err().to_string().contains("sort tag"));
        let frame = r#"{"name":"f","X":["a"],"Y":["b"],"gal":[["a","c"]]}"#;
        assert!(matches!(parse_frame(frame, "f.json"), Err(IoError::Semantic { .. })));
    }

    #[test]
    fn dual_tag_accepts_partial_symbol() {
        let doc = r#"{"name":"c2","elements":["0","1"],"leq":[["0","1"]],
            "operators":[{"name":"box","dtype":{"inputs":["∂"],"output":"d"},"table":[
                {"args":["0"],"value":"0"},{"args":["1"],"value":"1"}]}]}"#;
        let nle = parse_nle(doc, "b.json").unwrap();
        assert_eq!(nle.operators[0].dtype.inputs, vec![Sort::Dual]);
    }

    #[test]
    fn goedel_document_has_the_expected_type() {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/g3.json");
        let nle = load_nle(&path).unwrap().value;
        assert_eq!(
            nle.similarity_type(),
            vec![
                DistributionType::new(vec![Sort::One, Sort::One], Sort::One),
                DistributionType::new(vec![Sort::One, Sort::Dual], Sort::Dual),
            ]
        );
    }
}
