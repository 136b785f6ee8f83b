//! ASCII AIGER (`aag`) output and input.

use super::circuit::{Circuit, Latch, Lit};
use std::collections::HashMap;
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct AigerError {
    pub line: usize,
    pub msg: String,
}

/// Header `aag M I L O A`, then inputs, latches (reset 0), outputs, and-gates
/// and the symbol table.
pub fn write_aiger(c: &Circuit) -> String {
    let mut out =
        format!("aag {} {} {} {} {}\n", c.max_var(), c.inputs.len(), c.latches.len(), c.outputs.len(), c.ands.len());
    for k in 0..c.inputs.len() {
        let _ = writeln!(out, "{}", c.input_lit(k));
    }
    for (k, l) in c.latches.iter().enumerate() {
        let _ = writeln!(out, "{} {}", c.latch_lit(k), l.next);
    }
    for (_, l) in &c.outputs {
        let _ = writeln!(out, "{l}");
    }
    for (k, &(a, b)) in c.ands.iter().enumerate() {
        let _ = writeln!(out, "{} {a} {b}", c.and_lit(k));
    }
    for (k, name) in c.inputs.iter().enumerate() {
        let _ = writeln!(out, "i{k} {name}");
    }
    for (k, l) in c.latches.iter().enumerate() {
        let _ = writeln!(out, "l{k} {}", l.name);
    }
    for (k, (name, _)) in c.outputs.iter().enumerate() {
        let _ = writeln!(out, "o{k} {name}");
    }
    out
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, AigerError> {
    Err(AigerError { line, msg: msg.into() })
}

fn numbers(line: usize, text: &str, count: usize) -> Result<Vec<usize>, AigerError> {
    let parts: Vec<&str> = text.split(' ').collect();
    if parts.len() != count {
        return err(line, format!("expected {count} numbers, found `{text}`"));
    }
    parts
        .iter()
        .map(|p| {
            if p.is_empty() || !p.bytes().all(|b| b.is_ascii_digit()) || (p.len() > 1 && p.starts_with('0')) {
                err(line, format!("malformed number `{p}`"))
            } else {
                p.parse().or_else(|_| err(line, format!("number `{p}` out of range")))
            }
        })
        .collect()
}

#[derive(Clone, Copy, PartialEq)]
enum Def {
    Input(usize),
    Latch(usize),
    And(usize),
}

/// Parse an ASCII AIGER file with reset-0 latches. Variables are renumbered
/// into the canonical layout (inputs, latches, and-gates in topological order).
pub fn read_aiger(text: &str) -> Result<Circuit, AigerError> {
    let mut lines = text.split('\n').enumerate().map(|(k, l)| (k + 1, l));
    let (_, header) = lines.next().ok_or(AigerError { line: 1, msg: "empty file".into() })?;
    let Some(rest) = header.strip_prefix("aag ") else {
        return err(1, "header must start with `aag `");
    };
    let h = numbers(1, rest, 5)?;
    let (m, ni, nl, no, na) = (h[0], h[1], h[2], h[3], h[4]);
    if m < ni + nl + na {
        return err(1, "M is smaller than I + L + A");
    }
    let mut next_line = |what: &str| -> Result<(usize, &str), AigerError> {
        lines.next().ok_or(AigerError { line: 0, msg: format!("unexpected end of file, expected {what}") })
    };
    let mut defs: HashMap<usize, Def> = HashMap::new();
    let define = |defs: &mut HashMap<usize, Def>, line: usize, lit: usize, d: Def| -> Result<(), AigerError> {
        if lit < 2 || lit % 2 == 1 {
            return err(line, format!("defined literal {lit} must be even and positive"));
        }
        if lit / 2 > m {
            return err(line, format!("literal {lit} exceeds M"));
        }
        if defs.insert(lit / 2, d).is_some() {
            return err(line, format!("variable {} defined twice", lit / 2));
        }
        Ok(())
    };
    let check = |line: usize, lit: usize| -> Result<(), AigerError> {
        if lit / 2 > m {
            return err(line, format!("literal {lit} exceeds M"));
        }
        Ok(())
    };
    let mut input_vars = Vec::with_capacity(ni);
    for k in 0..ni {
        let (ln, t) = next_line("an input")?;
        let v = numbers(ln, t, 1)?[0];
        define(&mut defs, ln, v, Def::Input(k))?;
        input_vars.push(v / 2);
    }
    let mut latch_raw = Vec::with_capacity(nl);
    for k in 0..nl {
        let (ln, t) = next_line("a latch")?;
        let v = if t.split(' ').count() == 3 { numbers(ln, t, 3)? } else { numbers(ln, t, 2)? };
        if v.len() == 3 && v[2] != 0 {
            return err(ln, "only reset-0 latches are supported");
        }
        define(&mut defs, ln, v[0], Def::Latch(k))?;
        check(ln, v[1])?;
        latch_raw.push((v[0] / 2, v[1], ln));
    }
    let mut out_raw = Vec::with_capacity(no);
    for _ in 0..no {
        let (ln, t) = next_line("an output")?;
        let v = numbers(ln, t, 1)?[0];
        check(ln, v)?;
        out_raw.push((v, ln));
    }
    let mut and_raw = Vec::with_capacity(na);
    for k in 0..na {
        let (ln, t) = next_line("an and-gate")?;
        let v = numbers(ln, t, 3)?;
        define(&mut defs, ln, v[0], Def::And(k))?;
        check(ln, v[1])?;
        check(ln, v[2])?;
        and_raw.push((v[0] / 2, v[1], v[2], ln));
    }
    let mut in_names: Vec<Option<String>> = vec![None; ni];
    let mut latch_names: Vec<Option<String>> = vec![None; nl];
    let mut out_names: Vec<Option<String>> = vec![None; no];
    for (ln, t) in lines.by_ref() {
        if t == "c" {
            break;
        }
        if t.is_empty() {
            continue;
        }
        let (kind, rest) = t.split_at(1);
        let Some((pos, name)) = rest.split_once(' ') else {
            return err(ln, format!("malformed symbol `{t}`"));
        };
        let pos = numbers(ln, pos, 1)?[0];
        let slot = match kind {
            "i" => in_names.get_mut(pos),
            "l" => latch_names.get_mut(pos),
            "o" => out_names.get_mut(pos),
            _ => return err(ln, format!("unknown symbol kind `{kind}`")),
        };
        match slot {
            Some(s) if s.is_none() => *s = Some(name.to_string()),
            Some(_) => return err(ln, format!("duplicate symbol `{t}`")),
            None => return err(ln, format!("symbol position {pos} out of range")),
        }
    }

    // Every used variable must be defined.
    let used = |lit: usize, ln: usize, defs: &HashMap<usize, Def>| -> Result<(), AigerError> {
        if lit / 2 != 0 && !defs.contains_key(&(lit / 2)) {
            return err(ln, format!("literal {lit} is undefined"));
        }
        Ok(())
    };
    for &(_, next, ln) in &latch_raw {
        used(next, ln, &defs)?;
    }
    for &(o, ln) in &out_raw {
        used(o, ln, &defs)?;
    }
    for &(_, a, b, ln) in &and_raw {
        used(a, ln, &defs)?;
        used(b, ln, &defs)?;
    }

    // Topological order of the and-gates (depth-first, cycle check).
    let and_of: HashMap<usize, usize> = and_raw.iter().enumerate().map(|(k, a)| (a.0, k)).collect();
    let mut state = vec![0u8; na]; // 0 new, 1 on stack, 2 done
    let mut order = Vec::with_capacity(na);
    for root in 0..na {
        if state[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        state[root] = 1;
        while let Some(&mut (k, ref mut child)) = stack.last_mut() {
            let (_, a, b, ln) = and_raw[k];
            if *child < 2 {
                let lit = if *child == 0 { a } else { b };
                *child += 1;
                if let Some(&j) = and_of.get(&(lit / 2)) {
                    match state[j] {
                        0 => {
                            state[j] = 1;
                            stack.push((j, 0));
                        }
                        1 => return err(ln, "combinational cycle"),
                        _ => {}
                    }
                }
            } else {
                state[k] = 2;
                order.push(k);
                stack.pop();
            }
        }
    }

    let mut var_map: HashMap<usize, Lit> = HashMap::new();
    for (k, &v) in input_vars.iter().enumerate() {
        var_map.insert(v, (k + 1) as Lit);
    }
    for (k, l) in latch_raw.iter().enumerate() {
        var_map.insert(l.0, (ni + k + 1) as Lit);
    }
    for (pos, &k) in order.iter().enumerate() {
        var_map.insert(and_raw[k].0, (ni + nl + pos + 1) as Lit);
    }
    let tr = |lit: usize| -> Lit {
        let v = lit / 2;
        let base = if v == 0 { 0 } else { var_map[&v] };
        2 * base + (lit % 2) as Lit
    };
    Ok(Circuit {
        inputs: in_names.into_iter().enumerate().map(|(k, n)| n.unwrap_or_else(|| format!("i{k}"))).collect(),
        latches: latch_raw
            .iter()
            .zip(latch_names)
            .enumerate()
            .map(|(k, (l, n))| Latch { name: n.unwrap_or_else(|| format!("l{k}")), next: tr(l.1) })
            .collect(),
        ands: order.iter().map(|&k| (tr(and_raw[k].1), tr(and_raw[k].2))).collect(),
        outputs: out_raw
            .iter()
            .zip(out_names)
            .enumerate()
            .map(|(k, (o, n))| (n.unwrap_or_else(|| format!("o{k}")), tr(o.0)))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_output() {
        let c = Circuit { inputs: vec!["a".into()], latches: vec![], ands: vec![], outputs: vec![("b".into(), 0)] };
        let text = write_aiger(&c);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(&lines[..3], &["aag 1 1 0 1 0", "2", "0"]);
        assert_eq!(read_aiger(&text).unwrap(), c);
    }

    #[test]
    fn renumbers_unordered_gates() {
        // Gate 8 uses gate 6, which is listed after it.
        let text = "aag 4 2 0 1 2\n2\n4\n8\n8 6 2\n6 3 5\n";
        let c = read_aiger(text).unwrap();
        assert_eq!(c.ands, vec![(3, 5), (6, 2)]);
        assert_eq!(c.outputs[0].1, 8);
        for i in 0..4 {
            let a = i & 1 == 1;
            let b = i >> 1 & 1 == 1;
            assert_eq!(c.simulate(&[i])[0] == 1, !a && !b && a);
        }
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "",
            "aig 0 0 0 0 0\n",
            "aag 1 1 0 0 0\n3\n",
            "aag 1 2 0 0 0\n2\n2\n",
            "aag 1 0 0 1 0\n4\n",
            "aag 2 0 0 1 2\n2\n2 4 1\n4 2 1\n",
            "aag 1 0 1 0 0\n2 3 1\n",
            "aag 0 0 0 1 0\n01\n",
            "aag 1 1 0 0 0\n2\nx0 a\n",
        ] {
            assert!(read_aiger(bad).is_err(), "{bad:?}");
        }
    }
}
