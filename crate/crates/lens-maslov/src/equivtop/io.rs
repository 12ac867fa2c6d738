//! Plain-text persistence for equivariant complexes and their subcomplexes.
//!
//! The format is line-oriented:
//!
//! ```text
//! equivcomplex 3 2        # header: group order k, number of circle factors
//! v 0                     # one line per vertex, ids 0..n-1 in any order
//! v 1
//! ...
//! s 0 2 4                 # one line per top simplex (upstairs vertex ids)
//! ...
//! g 1 2 0 4 5 3           # the generator as a permutation of the vertices
//! sub equator             # a named subcomplex, then bare id-list lines:
//! 0 2                     # upstairs top simplices; orbits and faces are
//! 1 4                     # filled in when loading
//! ```
//!
//! Blank lines and `#` comments are ignored. Vertices of factor `f` occupy
//! the contiguous id block `f·(n/M)..(f+1)·(n/M)`, which is how every model
//! this library builds is numbered; the header's `M` recovers the factor of
//! each vertex from its id alone.

use std::collections::BTreeMap;

use super::complex::EquivComplex;
use super::quotient::{QuotientComplex, Subcomplex};
use crate::{Error, Result};

/// Named subcomplex payload: upstairs top simplices, one per orbit is enough.
pub type NamedSubs = Vec<(String, Vec<Vec<u32>>)>;

fn parse_error(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse { line, reason: reason.into() }
}

fn parse_ids(line_no: usize, tokens: &[&str]) -> Result<Vec<u32>> {
    tokens
        .iter()
        .map(|t| {
            t.parse::<u32>()
                .map_err(|_| parse_error(line_no, format!("expected a vertex id, got {t:?}")))
        })
        .collect()
}

/// Parse the text form of a complex. Returns the complex and the named
/// subcomplex sections in file order, without interpreting them.
pub fn parse_complex(text: &str) -> Result<(EquivComplex, NamedSubs)> {
    let mut header: Option<(u32, usize)> = None;
    let mut vertices: Vec<bool> = Vec::new();
    let mut vertex_lines = 0usize;
    let mut tops: Vec<Vec<u32>> = Vec::new();
    let mut generator: Option<Vec<u32>> = None;
    let mut subs: NamedSubs = Vec::new();
    let mut in_sub = false;

    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if header.is_none() {
            if tokens.len() != 3 || tokens[0] != "equivcomplex" {
                return Err(parse_error(line_no, "expected header: equivcomplex <k> <M>"));
            }
            let k = tokens[1]
                .parse::<u32>()
                .map_err(|_| parse_error(line_no, "group order must be an integer"))?;
            let m = tokens[2]
                .parse::<usize>()
                .map_err(|_| parse_error(line_no, "factor count must be an integer"))?;
            if m == 0 {
                return Err(parse_error(line_no, "factor count must be positive"));
            }
            header = Some((k, m));
            continue;
        }
        match tokens[0] {
            "v" => {
                if in_sub {
                    return Err(parse_error(line_no, "vertex line after a sub section"));
                }
                let ids = parse_ids(line_no, &tokens[1..])?;
                if ids.len() != 1 {
                    return Err(parse_error(line_no, "vertex line must carry exactly one id"));
                }
                let id = ids[0] as usize;
                if id >= vertices.len() {
                    vertices.resize(id + 1, false);
                }
                if vertices[id] {
                    return Err(parse_error(line_no, format!("vertex {id} declared twice")));
                }
                vertices[id] = true;
                vertex_lines += 1;
            }
            "s" => {
                if in_sub {
                    return Err(parse_error(line_no, "simplex line after a sub section"));
                }
                let ids = parse_ids(line_no, &tokens[1..])?;
                if ids.is_empty() {
                    return Err(parse_error(line_no, "empty simplex"));
                }
                tops.push(ids);
            }
            "g" => {
                if in_sub {
                    return Err(parse_error(line_no, "generator line after a sub section"));
                }
                if generator.is_some() {
                    return Err(parse_error(line_no, "generator declared twice"));
                }
                generator = Some(parse_ids(line_no, &tokens[1..])?);
            }
            "sub" => {
                if tokens.len() != 2 {
                    return Err(parse_error(line_no, "expected: sub <name>"));
                }
                let name = tokens[1].to_string();
                if subs.iter().any(|(n, _)| *n == name) {
                    return Err(parse_error(line_no, format!("sub {name:?} declared twice")));
                }
                subs.push((name, Vec::new()));
                in_sub = true;
            }
            _ if in_sub => {
                let ids = parse_ids(line_no, &tokens)?;
                subs.last_mut().expect("in_sub implies a current sub").1.push(ids);
            }
            other => {
                return Err(parse_error(line_no, format!("unknown directive {other:?}")));
            }
        }
    }

    let (k, m) = header.ok_or_else(|| parse_error(1, "missing header"))?;
    let n = vertices.len();
    if n == 0 || vertex_lines != n {
        return Err(parse_error(
            1,
            format!("vertex ids must be exactly 0..{}, got {vertex_lines} lines", n.max(1) - 1),
        ));
    }
    let generator = generator.ok_or_else(|| parse_error(1, "missing generator line"))?;
    if n % m != 0 {
        return Err(parse_error(1, format!("{n} vertices cannot split into {m} equal factors")));
    }
    let block = n / m;
    let factor_of_vertex: Vec<usize> = (0..n).map(|v| v / block).collect();
    let complex =
        EquivComplex::from_top_simplices(k, n as u32, generator, &tops, factor_of_vertex)?;
    Ok((complex, subs))
}

/// Serialize a complex and named subcomplex sections to the text format.
///
/// Fails if the vertex numbering does not put each factor in a contiguous
/// equal-size block, because the format stores only the factor count.
pub fn write_complex(x: &EquivComplex, subs: &NamedSubs) -> Result<String> {
    let n = x.vertex_count() as usize;
    let m = x.factor_count();
    let block = n / m;
    let canonical = n % m == 0
        && x.factor_of_vertex().iter().enumerate().all(|(v, &f)| f == v / block);
    if !canonical {
        return Err(Error::BadComplex(
            "factor layout is not representable: vertices of each factor must \
             form contiguous equal blocks"
                .into(),
        ));
    }

    let mut out = String::new();
    out.push_str(&format!("equivcomplex {} {}\n", x.k(), m));
    for v in 0..n {
        out.push_str(&format!("v {v}\n"));
    }
    for top in x.maximal_simplices() {
        out.push('s');
        for v in top {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    out.push('g');
    for &img in x.generator() {
        out.push_str(&format!(" {img}"));
    }
    out.push('\n');
    for (name, simplices) in subs {
        out.push_str(&format!("sub {name}\n"));
        for simplex in simplices {
            let ids: Vec<String> = simplex.iter().map(|v| v.to_string()).collect();
            out.push_str(&ids.join(" "));
            out.push('\n');
        }
    }
    Ok(out)
}

/// Parse a file and build the quotient model plus its named subcomplexes.
///
/// Each listed simplex seeds its whole orbit; faces are closed afterwards,
/// so one representative per top orbit is all a file needs to carry.
pub fn load_model(text: &str) -> Result<(QuotientComplex, BTreeMap<String, Subcomplex>)> {
    let (complex, subs) = parse_complex(text)?;
    let quotient = QuotientComplex::new(complex)?;
    let mut named = BTreeMap::new();
    for (name, simplices) in subs {
        let mut seeds = Vec::new();
        for mut simplex in simplices {
            simplex.sort_unstable();
            simplex.dedup();
            let degree = simplex.len() - 1;
            let (cell, _) = quotient.proj(&simplex).ok_or_else(|| {
                Error::BadComplex(format!(
                    "sub {name:?} lists {simplex:?}, which is not a simplex of the complex"
                ))
            })?;
            seeds.push((degree, cell));
        }
        named.insert(name, Subcomplex::generated_by(&quotient, seeds));
    }
    Ok((quotient, named))
}

/// Fetch one named subcomplex from a loaded model, understanding the two
/// built-in names `full` and `empty` without requiring them in the file.
pub fn resolve_subcomplex(
    quotient: &QuotientComplex,
    named: &BTreeMap<String, Subcomplex>,
    name: &str,
) -> Result<Subcomplex> {
    match name {
        "full" => Ok(Subcomplex::full(quotient)),
        "empty" => Ok(Subcomplex::empty(quotient)),
        _ => named.get(name).cloned().ok_or_else(|| {
            let mut known: Vec<&str> = named.keys().map(String::as_str).collect();
            known.extend(["full", "empty"]);
            Error::UnknownSubcomplex(format!("{name:?} (known: {})", known.join(", ")))
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivtop::{circle_complex, lens_model};
    use crate::sampling;
    use std::collections::BTreeSet;

    #[test]
    fn a_model_survives_the_round_trip() {
        let original = lens_model(3, &[1, 2]).unwrap();
        let text = write_complex(original.upstairs(), &Vec::new()).unwrap();
        let (parsed, subs) = parse_complex(&text).unwrap();
        assert_eq!(&parsed, original.upstairs());
        assert!(subs.is_empty());
    }

    #[test]
    fn subcomplexes_survive_the_round_trip() {
        let q = lens_model(3, &[1, 1]).unwrap();
        let factors: BTreeSet<usize> = [0].into();
        let sub = Subcomplex::lens_subspace(&q, &factors);
        let tops: Vec<Vec<u32>> = sub
            .maximal_cells(&q)
            .into_iter()
            .map(|(d, cell)| q.reps(d)[cell].clone())
            .collect();
        let text =
            write_complex(q.upstairs(), &vec![("first-factor".to_string(), tops)]).unwrap();
        let (loaded, named) = load_model(&text).unwrap();
        assert_eq!(loaded.f_vector(), q.f_vector());
        assert_eq!(named["first-factor"], sub);
    }

    #[test]
    fn random_subcomplexes_survive_the_round_trip() {
        let q = lens_model(3, &[1, 1]).unwrap();
        let mut rng = sampling::rng(0x10AD);
        for _ in 0..5 {
            let sub = Subcomplex::random(&q, 0.4, &mut rng);
            let tops: Vec<Vec<u32>> = sub
                .maximal_cells(&q)
                .into_iter()
                .map(|(d, cell)| q.reps(d)[cell].clone())
                .collect();
            let text = write_complex(q.upstairs(), &vec![("r".to_string(), tops)]).unwrap();
            let (_, named) = load_model(&text).unwrap();
            assert_eq!(named["r"], sub);
        }
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "# a triangle with rotation\n\nequivcomplex 3 1\nv 0\nv 1\nv 2\n\
                    s 0 1\ns 1 2\ns 0 2\n# generator:\ng 1 2 0\n";
        let (parsed, _) = parse_complex(text).unwrap();
        assert_eq!(&parsed, &circle_complex(3, 1).unwrap());
    }

    #[test]
    fn factor_blocks_are_recovered_from_the_header() {
        let q = lens_model(5, &[1, 2]).unwrap();
        let text = write_complex(q.upstairs(), &Vec::new()).unwrap();
        let (parsed, _) = parse_complex(&text).unwrap();
        assert_eq!(parsed.factor_of_vertex(), q.upstairs().factor_of_vertex());
    }

    #[test]
    fn malformed_files_name_the_offending_line() {
        let cases: &[(&str, usize)] = &[
            ("equivcomplex 3\nv 0\n", 1),
            ("equivcomplex 3 1\nv 0\nv 0\n", 3),
            ("equivcomplex 3 1\nv 0\nv 1\nv 2\ns 0 1\ng 1 2 0\n7 7\n", 7),
            ("equivcomplex 3 1\nv 0\nw 1\n", 3),
        ];
        for (text, expected_line) in cases {
            match parse_complex(text) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, *expected_line, "{text:?}"),
                other => panic!("expected a parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn missing_pieces_are_rejected() {
        assert!(parse_complex("").is_err());
        assert!(parse_complex("equivcomplex 3 1\n").is_err());
        assert!(parse_complex("equivcomplex 3 1\nv 0\nv 1\nv 2\ns 0 1\n").is_err());
        // 4 vertices cannot split into 3 equal factor blocks.
        assert!(matches!(
            parse_complex("equivcomplex 3 3\nv 0\nv 1\nv 2\nv 3\ns 0 1\ng 1 2 0 3\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn unknown_subcomplex_names_list_the_known_ones() {
        let q = lens_model(3, &[1]).unwrap();
        let named = BTreeMap::new();
        assert!(resolve_subcomplex(&q, &named, "full").is_ok());
        assert!(resolve_subcomplex(&q, &named, "empty").is_ok());
        assert!(matches!(
            resolve_subcomplex(&q, &named, "nope"),
            Err(Error::UnknownSubcomplex(_))
        ));
    }
}
