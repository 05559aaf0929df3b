//! The `.abd` instance format: a DIMACS-style, line-oriented encoding of
//! abduction instances.
//!
//! ```text
//! c <comment>                ignored
//! p abd <nvars>              header, first significant line
//! n <var> <name>             optional display name
//! h <class> <var> ... 0      hypothesis class (classes 1..m, one line each)
//! m <var> ... 0              manifestations (exactly one line)
//! w <var> <weight>           optional penalty weight, one per line
//! <lit> ... <lit> 0          clause; negative integer = negated variable
//! ```
//!
//! Canonical serialization emits the integer core only: header, class
//! lines, the manifestation line, weight lines sorted by variable, and the
//! clauses in canonical order. Display names are an input-side overlay;
//! parsing a serialized document reconstructs the same instance up to
//! names.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use abduction::instance::{Clause, Instance, InstanceError, Theory, VarId, VarSet};

/// A parse or validation failure, with a 1-based line number when the
/// offending line is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: Option<usize>,
    pub message: String,
}

impl ParseError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError { line: Some(line), message: message.into() }
    }

    fn whole(message: impl Into<String>) -> Self {
        ParseError { line: None, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ParseError {}

impl From<InstanceError> for ParseError {
    fn from(e: InstanceError) -> Self {
        ParseError::whole(e.to_string())
    }
}

fn parse_var(token: &str, nvars: u32, line: usize) -> Result<VarId, ParseError> {
    let v: VarId = token
        .parse()
        .map_err(|_| ParseError::at(line, format!("expected variable id, got `{token}`")))?;
    if v == 0 || v > nvars {
        return Err(ParseError::at(line, format!("variable {v} out of range 1..={nvars}")));
    }
    Ok(v)
}

/// Parse a zero-terminated id list; returns the ids.
fn parse_terminated(tokens: &[&str], nvars: u32, line: usize) -> Result<Vec<VarId>, ParseError> {
    match tokens.split_last() {
        Some((&"0", rest)) => rest.iter().map(|t| parse_var(t, nvars, line)).collect(),
        _ => Err(ParseError::at(line, "list must end with 0")),
    }
}

/// Parse an `.abd` document into a validated instance.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut nvars: Option<u32> = None;
    let mut names: Vec<Option<String>> = Vec::new();
    let mut classes: BTreeMap<usize, (usize, VarSet)> = BTreeMap::new();
    let mut manifestations: Option<VarSet> = None;
    let mut weights: Option<BTreeMap<VarId, u64>> = None;
    let mut clauses: Vec<Clause> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens[0] == "c" {
            continue;
        }
        if nvars.is_none() {
            if tokens.len() == 3 && tokens[0] == "p" && tokens[1] == "abd" {
                let n: u32 = tokens[2].parse().map_err(|_| {
                    ParseError::at(line_no, format!("bad variable count `{}`", tokens[2]))
                })?;
                nvars = Some(n);
                names = vec![None; n as usize];
                continue;
            }
            return Err(ParseError::at(line_no, "expected header `p abd <nvars>`"));
        }
        let n = nvars.unwrap();
        match tokens[0] {
            "p" => return Err(ParseError::at(line_no, "duplicate header")),
            "n" => {
                if tokens.len() != 3 {
                    return Err(ParseError::at(line_no, "expected `n <var> <name>`"));
                }
                let v = parse_var(tokens[1], n, line_no)?;
                let name = tokens[2].to_string();
                if names.iter().flatten().any(|existing| *existing == name) {
                    return Err(ParseError::at(line_no, format!("duplicate name `{name}`")));
                }
                if names[v as usize - 1].is_some() {
                    return Err(ParseError::at(line_no, format!("variable {v} already named")));
                }
                names[v as usize - 1] = Some(name);
            }
            "h" => {
                if tokens.len() < 3 {
                    return Err(ParseError::at(line_no, "expected `h <class> <vars...> 0`"));
                }
                let class: usize = tokens[1].parse().map_err(|_| {
                    ParseError::at(line_no, format!("bad class index `{}`", tokens[1]))
                })?;
                if class == 0 {
                    return Err(ParseError::at(line_no, "class indexes start at 1"));
                }
                if classes.contains_key(&class) {
                    return Err(ParseError::at(line_no, format!("duplicate class {class}")));
                }
                let vars = parse_terminated(&tokens[2..], n, line_no)?;
                classes.insert(class, (line_no, VarSet::from_vec(vars)));
            }
            "m" => {
                if manifestations.is_some() {
                    return Err(ParseError::at(line_no, "duplicate manifestation line"));
                }
                let vars = parse_terminated(&tokens[1..], n, line_no)?;
                manifestations = Some(VarSet::from_vec(vars));
            }
            "w" => {
                if tokens.len() != 3 {
                    return Err(ParseError::at(line_no, "expected `w <var> <weight>`"));
                }
                let v = parse_var(tokens[1], n, line_no)?;
                let weight: u64 = tokens[2].parse().map_err(|_| {
                    ParseError::at(line_no, format!("bad weight `{}`", tokens[2]))
                })?;
                let map = weights.get_or_insert_with(BTreeMap::new);
                if map.insert(v, weight).is_some() {
                    return Err(ParseError::at(line_no, format!("duplicate weight for {v}")));
                }
            }
            _ => {
                // clause line
                let codes: Result<Vec<i64>, _> = tokens.iter().map(|t| t.parse::<i64>()).collect();
                let codes = codes.map_err(|_| {
                    ParseError::at(line_no, format!("unrecognized line `{}`", tokens[0]))
                })?;
                match codes.split_last() {
                    Some((0, lits)) => {
                        if lits.contains(&0) {
                            return Err(ParseError::at(line_no, "unexpected 0 inside clause"));
                        }
                        for &c in lits {
                            if c.unsigned_abs() > n as u64 {
                                return Err(ParseError::at(
                                    line_no,
                                    format!("variable {} out of range 1..={n}", c.unsigned_abs()),
                                ));
                            }
                        }
                        clauses.push(Clause::from_codes(lits).expect("nonzero codes"));
                    }
                    _ => return Err(ParseError::at(line_no, "clause must end with 0")),
                }
            }
        }
    }

    let nvars = nvars.ok_or_else(|| ParseError::whole("empty document, no header"))?;
    if classes.is_empty() {
        return Err(ParseError::whole("no hypothesis line"));
    }
    let manifestations = manifestations.ok_or_else(|| ParseError::whole("no manifestation line"))?;
    // classes 1..m, contiguous
    let m = *classes.keys().max().unwrap();
    let mut ordered = Vec::with_capacity(m);
    for i in 1..=m {
        match classes.remove(&i) {
            Some((_, set)) => ordered.push(set),
            None => return Err(ParseError::whole(format!("hypothesis class {i} missing"))),
        }
    }

    Ok(Instance::new(nvars, names, ordered, manifestations, Theory::new(clauses), weights, None)?)
}

/// Canonical serialization of an instance (integer core, no names).
pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p abd {}", inst.num_vars());
    for (i, class) in inst.classes().iter().enumerate() {
        let _ = write!(out, "h {}", i + 1);
        for v in class.iter() {
            let _ = write!(out, " {v}");
        }
        let _ = writeln!(out, " 0");
    }
    let _ = write!(out, "m");
    for v in inst.manifestations().iter() {
        let _ = write!(out, " {v}");
    }
    let _ = writeln!(out, " 0");
    if let Some(weights) = inst.weights() {
        for (v, w) in weights {
            let _ = writeln!(out, "w {v} {w}");
        }
    }
    for clause in inst.theory().clauses() {
        let _ = writeln!(out, "{clause}");
    }
    out
}

/// The running TeX example as a document, names included.
pub fn tex_document() -> &'static str {
    "c the TeX troubleshooting example\n\
     p abd 5\n\
     n 1 a\n\
     n 2 p\n\
     n 3 t\n\
     n 4 v\n\
     n 5 f\n\
     h 1 1 2 3 4 0\n\
     m 5 0\n\
     -1 5 0\n\
     -2 5 0\n\
     -3 5 0\n\
     -4 5 0\n\
     -2 -3 0\n"
}

#[cfg(test)]
mod tests {
    use super::*;
    use abduction::instance::tex_example;
    use abduction::oracle::{gen_instance, GenConfig, Rng};

    #[test]
    fn tex_document_parses_to_the_example() {
        let inst = parse_instance(tex_document()).unwrap();
        assert_eq!(inst, tex_example());
        assert_eq!(inst.name(2), Some("p"));
    }

    #[test]
    fn tex_serialization_is_the_golden_eight_lines() {
        let doc = serialize_instance(&tex_example());
        let expected = "p abd 5\n\
                        h 1 1 2 3 4 0\n\
                        m 5 0\n\
                        -1 5 0\n\
                        -2 -3 0\n\
                        -2 5 0\n\
                        -3 5 0\n\
                        -4 5 0\n";
        assert_eq!(doc, expected);
        assert_eq!(doc.lines().count(), 8);
    }

    #[test]
    fn representative_instance_serializes_its_whole_universe() {
        let repr = abduction::reduce::repr_instance(2, abduction::reduce::ReprShape::Plain)
            .unwrap();
        let doc = serialize_instance(&repr);
        // header + class line + manifestation line + 64 universe clauses
        assert_eq!(doc.lines().count(), 3 + 64);
        assert_eq!(parse_instance(&doc).unwrap(), repr);
    }

    #[test]
    fn missing_manifestation_line() {
        let err = parse_instance("p abd 2\nh 1 1 0\n-1 2 0\n").unwrap_err();
        assert!(err.message.contains("no manifestation line"), "{err}");
    }

    #[test]
    fn missing_hypothesis_line() {
        let err = parse_instance("p abd 2\nm 2 0\n-1 2 0\n").unwrap_err();
        assert!(err.message.contains("no hypothesis line"), "{err}");
    }

    #[test]
    fn empty_class_line_round_trips() {
        let inst = parse_instance("p abd 1\nh 1 0\nm 1 0\n1 0\n").unwrap();
        assert!(inst.hypotheses().is_empty());
        let doc = serialize_instance(&inst);
        assert!(doc.contains("h 1 0\n"));
        assert_eq!(parse_instance(&doc).unwrap(), inst);
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = parse_instance("p abd 2\nh 1 1\nm 2 0\n").unwrap_err();
        assert_eq!(err.line, Some(2));
        let err = parse_instance("p abd 2\nh 1 1 0\nm 2 0\n3 0\n").unwrap_err();
        assert_eq!(err.line, Some(4));
        let err = parse_instance("q abd 2\n").unwrap_err();
        assert_eq!(err.line, Some(1));
        let err = parse_instance("p abd 2\nh 1 1 0\nh 1 2 0\nm 1 0\n1 0\n").unwrap_err();
        assert!(err.message.contains("duplicate class"));
    }

    #[test]
    fn semantic_errors_are_reported() {
        // manifestation not in theory
        let err = parse_instance("p abd 2\nh 1 1 2 0\nm 2 0\n1 0\n").unwrap_err();
        assert!(err.message.contains("does not occur in the theory"), "{err}");
        // zero weight
        let err = parse_instance("p abd 1\nh 1 1 0\nm 1 0\n1 0\nw 1 0\n").unwrap_err();
        assert!(err.message.contains("at least 1"), "{err}");
    }

    #[test]
    fn weighted_prioritized_round_trip() {
        let doc = "p abd 4\nh 1 1 0\nh 2 2 3 0\nm 4 0\nw 1 2\nw 2 1\nw 3 5\n-1 4 0\n-2 -3 4 0\n";
        let inst = parse_instance(doc).unwrap();
        assert_eq!(inst.num_classes(), 2);
        assert_eq!(inst.weights().unwrap().len(), 3);
        assert_eq!(parse_instance(&serialize_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn random_instances_round_trip() {
        let mut rng = Rng::new(2024);
        for i in 0..100 {
            let cfg = GenConfig {
                classes: 1 + (i % 3),
                weights: i % 2 == 0,
                ..GenConfig::default()
            };
            let inst = gen_instance(&mut rng, &cfg);
            let doc = serialize_instance(&inst);
            let back = parse_instance(&doc).unwrap();
            assert_eq!(back, inst, "round trip failed for:\n{doc}");
            // serialization is a fixpoint
            assert_eq!(serialize_instance(&back), doc);
        }
    }
}
