//! Text formats: preference profiles, DIMACS CNF, and (colored) graphs.
//!
//! Profile files are line oriented:
//!
//! ```text
//! # comment
//! agents 1 2 3 4
//! prefs 1: (2 3) 4
//! prefs 2: 1 3
//! prefs 3: (1 2) 4
//! prefs 4: 3 1
//! ```
//!
//! A parenthesized group is a tie; groups are listed from most to least
//! preferred.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{AgentId, PreferenceList, Profile};
use crate::reductions::{CnfFormula, ColoredGraph, Graph};

fn parse_err<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, message: message.into() })
}

// Splits off a trailing comment and separates parentheses into tokens.
fn tokens(line: &str) -> Vec<String> {
    let body = line.split('#').next().unwrap_or("");
    body.replace('(', " ( ").replace(')', " ) ").split_whitespace().map(str::to_string).collect()
}

fn check_name(line: usize, name: &str) -> Result<()> {
    if name.contains(':') {
        return parse_err(line, format!("agent name `{name}` may not contain `:`"));
    }
    Ok(())
}

pub fn parse_instance(text: &str) -> Result<Profile> {
    let mut names: Option<(usize, Vec<String>)> = None;
    let mut ids: HashMap<String, AgentId> = HashMap::new();
    let mut lists: Vec<Option<(usize, Vec<Vec<AgentId>>)>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks = tokens(raw);
        let Some(head) = toks.first() else { continue };
        match head.as_str() {
            "agents" => {
                if names.is_some() {
                    return parse_err(line, "second `agents` line");
                }
                let list: Vec<String> = toks[1..].to_vec();
                for (k, name) in list.iter().enumerate() {
                    check_name(line, name)?;
                    if name == "(" || name == ")" {
                        return parse_err(line, "parentheses are not allowed in the `agents` line");
                    }
                    if ids.insert(name.clone(), AgentId(k)).is_some() {
                        return parse_err(line, format!("agent `{name}` declared twice"));
                    }
                }
                lists = vec![None; list.len()];
                names = Some((line, list));
            }
            "prefs" => {
                if names.is_none() {
                    return parse_err(line, "`prefs` before the `agents` line");
                }
                let mut rest = toks[1..].iter().map(String::as_str);
                let owner_tok = rest.next().unwrap_or("");
                let owner_name = match owner_tok.strip_suffix(':') {
                    Some(o) => o,
                    None => {
                        if rest.next() != Some(":") {
                            return parse_err(line, "expected `prefs <name>: <entries>`");
                        }
                        owner_tok
                    }
                };
                let Some(&owner) = ids.get(owner_name) else {
                    return parse_err(line, format!("unknown agent `{owner_name}`"));
                };
                if let Some((prev, _)) = &lists[owner.0] {
                    return parse_err(line, format!("second preference list for `{owner_name}` (first on line {prev})"));
                }
                let mut groups: Vec<Vec<AgentId>> = Vec::new();
                let mut open: Option<Vec<AgentId>> = None;
                let mut seen = BTreeSet::new();
                for tok in rest {
                    match tok {
                        "(" => {
                            if open.is_some() {
                                return parse_err(line, "nested `(`");
                            }
                            open = Some(Vec::new());
                        }
                        ")" => match open.take() {
                            Some(g) if g.is_empty() => return parse_err(line, "empty tie group"),
                            Some(g) => groups.push(g),
                            None => return parse_err(line, "unbalanced `)`"),
                        },
                        name => {
                            let Some(&a) = ids.get(name) else {
                                return parse_err(line, format!("unknown agent `{name}`"));
                            };
                            if a == owner {
                                return parse_err(line, format!("`{name}` lists itself"));
                            }
                            if !seen.insert(a) {
                                return parse_err(line, format!("`{name}` listed twice by `{owner_name}`"));
                            }
                            match &mut open {
                                Some(g) => g.push(a),
                                None => groups.push(vec![a]),
                            }
                        }
                    }
                }
                if open.is_some() {
                    return parse_err(line, "unclosed `(`");
                }
                if groups.is_empty() {
                    return parse_err(line, format!("empty preference list for `{owner_name}`"));
                }
                lists[owner.0] = Some((line, groups));
            }
            other => return parse_err(line, format!("unknown directive `{other}`")),
        }
    }
    let Some((agents_line, names)) = names else {
        return parse_err(1, "missing `agents` line");
    };
    let mut out = Vec::with_capacity(names.len());
    for (k, entry) in lists.iter().enumerate() {
        match entry {
            Some((_, groups)) => out.push(PreferenceList::new(groups.clone())),
            None => return parse_err(agents_line, format!("no preference list for `{}`", names[k])),
        }
    }
    for (k, entry) in lists.iter().enumerate() {
        let (line, groups) = entry.as_ref().expect("checked above");
        for &b in groups.iter().flatten() {
            if !out[b.0].agents().any(|x| x.0 == k) {
                return parse_err(
                    *line,
                    format!("`{}` lists `{}` but `{}` does not list `{}`", names[k], names[b.0], names[b.0], names[k]),
                );
            }
        }
    }
    Profile::new(names, out)
}

/// Canonical text of a profile: one `agents` line, then the lists in id
/// order with tie members sorted by id.
pub fn serialize_instance(profile: &Profile) -> String {
    let mut s = String::from("agents");
    for name in profile.names() {
        s.push(' ');
        s.push_str(name);
    }
    s.push('\n');
    for a in profile.agents() {
        write!(s, "prefs {}:", profile.name(a)).unwrap();
        for g in profile.list(a).groups() {
            if g.len() == 1 {
                write!(s, " {}", profile.name(g[0])).unwrap();
            } else {
                let inner: Vec<&str> = g.iter().map(|&x| profile.name(x)).collect();
                write!(s, " ({})", inner.join(" ")).unwrap();
            }
        }
        s.push('\n');
    }
    s
}

/// DIMACS CNF: `c` comment lines, a `p cnf <vars> <clauses>` header, and
/// zero-terminated clauses.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') || t.starts_with('%') {
            continue;
        }
        if t.starts_with('p') {
            let parts: Vec<&str> = t.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return parse_err(line, "expected `p cnf <variables> <clauses>`");
            }
            let v = parts[2].parse().or_else(|_| parse_err(line, "bad variable count"))?;
            let c = parts[3].parse().or_else(|_| parse_err(line, "bad clause count"))?;
            header = Some((v, c));
            continue;
        }
        let Some((vars, _)) = header else {
            return parse_err(line, "clause before the `p cnf` header");
        };
        for tok in t.split_whitespace() {
            let lit: i64 = tok.parse().or_else(|_| parse_err(line, format!("bad literal `{tok}`")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                if lit.unsigned_abs() as usize > vars {
                    return parse_err(line, format!("literal {lit} exceeds the {vars} declared variables"));
                }
                current.push(lit as i32);
            }
        }
    }
    let Some((vars, count)) = header else {
        return parse_err(1, "missing `p cnf` header");
    };
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != count {
        return parse_err(text.lines().count(), format!("header declares {count} clauses, found {}", clauses.len()));
    }
    Ok(CnfFormula { num_vars: vars, clauses })
}

pub fn serialize_dimacs(f: &CnfFormula) -> String {
    let mut s = format!("p cnf {} {}\n", f.num_vars, f.clauses.len());
    for c in &f.clauses {
        for l in c {
            write!(s, "{l} ").unwrap();
        }
        s.push_str("0\n");
    }
    s
}

/// Colored graph: `classes <k>`, then `class <j> <names>...` for
/// `j = 1..=k`, then `edge <u> <v>` lines. A plain graph may instead use a
/// single `vertices <names>...` line; it is read as one class.
pub fn parse_graph(text: &str) -> Result<ColoredGraph> {
    let mut k: Option<usize> = None;
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut edges = BTreeSet::new();
    let mut plain = false;
    let mut add_vertex = |line: usize, name: &str, names: &mut Vec<String>| -> Result<usize> {
        if name.contains(':') {
            return parse_err(line, format!("vertex name `{name}` may not contain `:`"));
        }
        if ids.contains_key(name) {
            return parse_err(line, format!("vertex `{name}` declared twice"));
        }
        ids.insert(name.to_string(), names.len());
        names.push(name.to_string());
        Ok(names.len() - 1)
    };
    let mut pending_edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks = tokens(raw);
        let Some(head) = toks.first() else { continue };
        match head.as_str() {
            "classes" => {
                if k.is_some() || plain {
                    return parse_err(line, "second `classes`/`vertices` line");
                }
                let v = toks.get(1).and_then(|t| t.parse().ok());
                match v {
                    Some(v) if toks.len() == 2 => k = Some(v),
                    _ => return parse_err(line, "expected `classes <k>`"),
                }
            }
            "vertices" => {
                if k.is_some() || plain {
                    return parse_err(line, "second `classes`/`vertices` line");
                }
                plain = true;
                let mut members = Vec::new();
                for name in &toks[1..] {
                    members.push(add_vertex(line, name, &mut names)?);
                }
                classes.insert(1, members);
            }
            "class" => {
                let Some(kk) = k else {
                    return parse_err(line, "`class` before `classes`");
                };
                let j: usize = match toks.get(1).and_then(|t| t.parse().ok()) {
                    Some(j) if (1..=kk).contains(&j) => j,
                    _ => return parse_err(line, format!("class index must be in 1..={kk}")),
                };
                if classes.contains_key(&j) {
                    return parse_err(line, format!("class {j} declared twice"));
                }
                let mut members = Vec::new();
                for name in &toks[2..] {
                    members.push(add_vertex(line, name, &mut names)?);
                }
                classes.insert(j, members);
            }
            "edge" => {
                if toks.len() != 3 {
                    return parse_err(line, "expected `edge <u> <v>`");
                }
                pending_edges.push((line, toks[1].clone(), toks[2].clone()));
            }
            other => return parse_err(line, format!("unknown directive `{other}`")),
        }
    }
    let lookup: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    for (line, u, v) in pending_edges {
        let (Some(&a), Some(&b)) = (lookup.get(u.as_str()), lookup.get(v.as_str())) else {
            let missing = if lookup.contains_key(u.as_str()) { v } else { u };
            return parse_err(line, format!("unknown vertex `{missing}`"));
        };
        if a == b {
            return parse_err(line, format!("self-loop at `{u}`"));
        }
        edges.insert((a.min(b), a.max(b)));
    }
    let k = if plain { 1 } else { k.ok_or(Error::Parse { line: 1, message: "missing `classes` line".into() })? };
    let classes: Vec<Vec<usize>> = (1..=k)
        .map(|j| classes.remove(&j).ok_or(Error::Parse { line: 1, message: format!("class {j} not declared") }))
        .collect::<Result<_>>()?;
    Ok(ColoredGraph { graph: Graph { names, edges }, classes })
}

pub fn serialize_graph(g: &ColoredGraph) -> String {
    let mut s = format!("classes {}\n", g.classes.len());
    for (j, class) in g.classes.iter().enumerate() {
        write!(s, "class {}", j + 1).unwrap();
        for &v in class {
            write!(s, " {}", g.graph.names[v]).unwrap();
        }
        s.push('\n');
    }
    for &(u, v) in &g.graph.edges {
        writeln!(s, "edge {} {}", g.graph.names[u], g.graph.names[v]).unwrap();
    }
    s
}
