use alloc::format;
use alloc::string::String;
use core::fmt::Write;

use super::{Cmp, LinearProgram, Sense};

fn sanitize(name: &str, fallback: &str, index: usize) -> String {
    let cleaned: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || "_.[]()".contains(c) { c } else { '_' })
        .collect();
    if cleaned.is_empty() || cleaned.starts_with(|c: char| c.is_ascii_digit() || c == '.') {
        format!("{fallback}{index}_{cleaned}")
    } else {
        cleaned
    }
}

fn write_terms(out: &mut String, terms: impl Iterator<Item = (String, f64)>) {
    let mut first = true;
    for (name, a) in terms {
        if a == 0.0 {
            continue;
        }
        let sign = if a < 0.0 { "-" } else if first { "" } else { "+" };
        let mag = a.abs();
        if first {
            if sign.is_empty() {
                let _ = write!(out, " {mag} {name}");
            } else {
                let _ = write!(out, " - {mag} {name}");
            }
        } else {
            let _ = write!(out, " {sign} {mag} {name}");
        }
        first = false;
    }
    if first {
        out.push_str(" 0");
    }
}

/// Renders the model in CPLEX LP text format.
pub fn to_lp_format(lp: &LinearProgram) -> String {
    let names: alloc::vec::Vec<String> = lp
        .vars
        .iter()
        .enumerate()
        .map(|(j, v)| sanitize(&v.name, "x", j))
        .collect();
    let mut out = String::new();
    out.push_str(match lp.sense {
        Sense::Minimize => "Minimize\n",
        Sense::Maximize => "Maximize\n",
    });
    out.push_str(" obj:");
    write_terms(
        &mut out,
        lp.vars.iter().enumerate().map(|(j, v)| (names[j].clone(), v.objective)),
    );
    out.push_str("\nSubject To\n");
    for (i, c) in lp.constraints.iter().enumerate() {
        let _ = write!(out, " {}:", sanitize(&c.name, "c", i));
        write_terms(&mut out, c.terms.iter().map(|&(v, a)| (names[v.0].clone(), a)));
        let op = match c.cmp {
            Cmp::Le => "<=",
            Cmp::Ge => ">=",
            Cmp::Eq => "=",
        };
        let _ = writeln!(out, " {op} {}", c.rhs);
    }
    out.push_str("Bounds\n");
    for (j, v) in lp.vars.iter().enumerate() {
        let lo = v.lower;
        let hi = v.upper;
        if v.integer && lo == 0.0 && hi == 1.0 {
            continue;
        }
        let lo_s = if lo.is_finite() { format!("{lo}") } else { String::from("-inf") };
        let hi_s = if hi.is_finite() { format!("{hi}") } else { String::from("+inf") };
        let _ = writeln!(out, " {lo_s} <= {} <= {hi_s}", names[j]);
    }
    let generals: alloc::vec::Vec<&str> = lp
        .vars
        .iter()
        .enumerate()
        .filter(|(_, v)| v.integer && !(v.lower == 0.0 && v.upper == 1.0))
        .map(|(j, _)| names[j].as_str())
        .collect();
    let binaries: alloc::vec::Vec<&str> = lp
        .vars
        .iter()
        .enumerate()
        .filter(|(_, v)| v.integer && v.lower == 0.0 && v.upper == 1.0)
        .map(|(j, _)| names[j].as_str())
        .collect();
    if !generals.is_empty() {
        out.push_str("Generals\n");
        for g in generals {
            let _ = writeln!(out, " {g}");
        }
    }
    if !binaries.is_empty() {
        out.push_str("Binaries\n");
        for b in binaries {
            let _ = writeln!(out, " {b}");
        }
    }
    out.push_str("End\n");
    out
}
