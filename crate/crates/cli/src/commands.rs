//! Subcommand implementations. Each returns the text to print and the
//! exit code: 0 success, 2 hypotheses violated, 3 theorem violation.
//! Input errors come back as `Err` and exit with 1.

use std::fmt::Write as _;

use polymethod::additive::{
    build_proof_polynomials, cn_witness_for_eh, eh_sweep as run_sweep, q_top_coefficient,
    verify_eh, verify_full_sumset, SumsetInstance, SweepMode,
};
use polymethod::{
    binom_mod, check_hypotheses, find_witness, format_polynomial, CnInstance, Element, Grid,
    HypothesisReport, Ring,
};
use serde_json::{json, Value};

use crate::input::{parse_exponents, parse_grid, parse_list, parse_poly};
use crate::{CnArgs, EhArgs, GlobalArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub struct Outcome {
    pub output: String,
    pub code: u8,
}

type CmdResult = Result<Outcome, String>;

fn json_line(v: Value) -> String {
    // serde_json's default map is a BTreeMap, so keys come out sorted.
    format!("{v}\n")
}

fn no_csv(format: Format, command: &str) -> Result<(), String> {
    if format == Format::Csv {
        return Err(format!(
            "--csv is not available for `{command}`; use it with eh-sweep or eh-poly"
        ));
    }
    Ok(())
}

fn ring_from(g: &GlobalArgs) -> Result<Ring, String> {
    let m = g.modulus.ok_or("this command needs -m/--modulus")?;
    Ring::new(m).map_err(|e| e.to_string())
}

fn residues(xs: &[Element]) -> Vec<u64> {
    xs.iter().map(Element::residue).collect()
}

fn fmt_set(xs: &[u64]) -> String {
    let items: Vec<String> = xs.iter().map(u64::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

fn fmt_point(xs: &[Element]) -> String {
    let items: Vec<String> = xs.iter().map(Element::to_string).collect();
    format!("({})", items.join(", "))
}

fn report_json(r: &HypothesisReport) -> Value {
    serde_json::to_value(r).expect("plain struct")
}

fn build_instance(g: &GlobalArgs, args: &CnArgs) -> Result<(CnInstance, Vec<String>), String> {
    let ring = ring_from(g)?;
    let (poly, vars) = parse_poly(&args.poly, ring, g.vars.as_deref())?;
    let k = parse_exponents(&args.k)?;
    let sets = parse_grid(&args.sets)?;
    if k.len() != vars.len() || sets.len() != vars.len() {
        return Err(format!(
            "polynomial has {} variables ({}), but -k has {} entries and -A has {} sets; pass --vars to fix the order and count",
            vars.len(),
            vars.join(", "),
            k.len(),
            sets.len()
        ));
    }
    let grid = Grid::new(ring, sets).map_err(|e| e.to_string())?;
    let inst = CnInstance::new(poly, k, grid).map_err(|e| e.to_string())?;
    Ok((inst, vars))
}

pub fn check(g: &GlobalArgs, format: Format, args: &CnArgs) -> CmdResult {
    no_csv(format, "check")?;
    let (inst, _) = build_instance(g, args)?;
    let report = check_hypotheses(&inst);
    let output = match format {
        Format::Json => json_line(json!({ "hypotheses": report_json(&report) })),
        _ => format!("hypotheses: {report}\noverall: {}\n", report.overall),
    };
    Ok(Outcome {
        output,
        code: if report.overall { 0 } else { 2 },
    })
}

pub fn witness(g: &GlobalArgs, format: Format, args: &CnArgs) -> CmdResult {
    no_csv(format, "witness")?;
    let (inst, vars) = build_instance(g, args)?;
    let report = check_hypotheses(&inst);
    if !report.overall {
        let output = match format {
            Format::Json => json_line(json!({
                "hypotheses": report_json(&report),
                "witness": Value::Null,
            })),
            _ => format!("hypotheses: {report}\nno witness: hypotheses violated\n"),
        };
        return Ok(Outcome { output, code: 2 });
    }
    let w = find_witness(&inst).map_err(|e| e.to_string())?;
    let output = match format {
        Format::Json => {
            let trace: Vec<Value> = w
                .trace
                .iter()
                .map(|s| json!({ "var": vars[s.var], "pinned": s.pinned }))
                .collect();
            json_line(json!({
                "hypotheses": report_json(&report),
                "witness": {
                    "point": w.point,
                    "value": w.value,
                    "recursion_depth": w.recursion_depth,
                    "trace": trace,
                },
                "vars": vars,
            }))
        }
        _ => {
            let mut s = format!("hypotheses: {report}\n");
            for step in &w.trace {
                let _ = writeln!(
                    s,
                    "slice {} = {} vanishes; dividing",
                    vars[step.var], step.pinned
                );
            }
            let _ = writeln!(
                s,
                "point: {} = {}",
                fmt_point_names(&vars),
                fmt_point(&w.point)
            );
            let _ = writeln!(s, "value: {}", w.value);
            let _ = writeln!(s, "recursion_depth: {}", w.recursion_depth);
            s
        }
    };
    Ok(Outcome { output, code: 0 })
}

fn fmt_point_names(vars: &[String]) -> String {
    format!("({})", vars.join(", "))
}

pub fn divide(g: &GlobalArgs, format: Format, poly: &str, var: &str, at: &str) -> CmdResult {
    no_csv(format, "divide")?;
    let ring = ring_from(g)?;
    let (p, vars) = parse_poly(poly, ring, g.vars.as_deref())?;
    // A variable absent from the polynomial is added so the division is
    // still defined (quotient 0, remainder P).
    let (p, vars) = match vars.iter().position(|v| v == var) {
        Some(_) => (p, vars),
        None if g.vars.is_none() => {
            let mut extended = vars;
            extended.push(var.to_string());
            parse_poly(poly, ring, Some(&[var.to_string()]))
                .or_else(|_| parse_poly(poly, ring, Some(&extended)))?
        }
        None => return Err(format!("`{var}` is not one of --vars {}", vars.join(","))),
    };
    let index = vars.iter().position(|v| v == var).expect("present");
    let a = parse_list(at)?;
    let [a] = a.as_slice() else {
        return Err(format!("--at expects one residue, got `{at}`"));
    };
    let a = ring.from_u64(*a);
    let d = p.divide_by_linear(index, a).map_err(|e| e.to_string())?;
    let q = format_polynomial(&d.quotient, &vars).map_err(|e| e.to_string())?;
    let r = format_polynomial(&d.remainder, &vars).map_err(|e| e.to_string())?;
    let output = match format {
        Format::Json => json_line(json!({
            "at": a,
            "quotient": q,
            "remainder": r,
            "var": var,
            "vars": vars,
        })),
        _ => format!("P = ({var} - {a}) * Q + R\nQ = {q}\nR = {r}\n"),
    };
    Ok(Outcome { output, code: 0 })
}

pub fn eval(g: &GlobalArgs, format: Format, poly: &str, at: &str) -> CmdResult {
    no_csv(format, "eval")?;
    let ring = ring_from(g)?;
    let (p, vars) = parse_poly(poly, ring, g.vars.as_deref())?;
    let point: Vec<Element> = parse_list(at)?
        .into_iter()
        .map(|v| ring.from_u64(v))
        .collect();
    let value = p
        .evaluate(&point)
        .map_err(|e| format!("{e} (variables: {})", vars.join(", ")))?;
    let output = match format {
        Format::Json => json_line(json!({ "point": point, "value": value, "vars": vars })),
        _ => format!(
            "{} = {}: {value}\n",
            fmt_point_names(&vars),
            fmt_point(&point)
        ),
    };
    Ok(Outcome { output, code: 0 })
}

fn sumset_instance(args: &EhArgs) -> Result<SumsetInstance, String> {
    let a = parse_list(&args.a)?;
    let b = parse_list(&args.b)?;
    SumsetInstance::new(args.p, &a, &b).map_err(|e| e.to_string())
}

pub fn eh(format: Format, args: &EhArgs) -> CmdResult {
    no_csv(format, "eh")?;
    let inst = sumset_instance(args)?;
    let r = verify_eh(&inst);
    let output = match format {
        Format::Json => json_line(json!({
            "p": inst.p(),
            "A": inst.a(),
            "B": inst.b(),
            "C": r.c,
            "bound": r.bound,
            "holds": r.holds,
        })),
        _ => format!(
            "A = {}\nB = {}\nC = {}\n|C| = {}, bound min(p, |A|+|B|-3) = {}\nholds: {}\n",
            fmt_set(&residues(inst.a())),
            fmt_set(&residues(inst.b())),
            fmt_set(&residues(&r.c)),
            r.c_size,
            r.bound,
            r.holds
        ),
    };
    Ok(Outcome {
        output,
        code: if r.holds { 0 } else { 3 },
    })
}

pub fn eh_sweep(
    g: &GlobalArgs,
    format: Format,
    primes: &[u64],
    exhaustive: bool,
    samples: Option<u64>,
) -> CmdResult {
    let mode = match (exhaustive, samples) {
        (true, _) => SweepMode::Exhaustive,
        (false, Some(count)) => SweepMode::Sampled {
            count,
            seed: g.seed.ok_or("sampled sweeps need --seed")?,
        },
        (false, None) => return Err("choose --exhaustive or --samples N".into()),
    };
    let reports = run_sweep(primes, mode, g.parallel).map_err(|e| e.to_string())?;
    let total_pairs: u64 = reports.iter().map(|r| r.pairs).sum();
    let total_violations: usize = reports.iter().map(|r| r.violations.len()).sum();
    let output = match format {
        Format::Json => json_line(json!({
            "reports": reports,
            "total_pairs": total_pairs,
            "total_violations": total_violations,
        })),
        Format::Csv => {
            let mut s = String::from("p,mode,pairs,tight,violations\n");
            for r in &reports {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    r.p,
                    r.mode,
                    r.pairs,
                    r.tight,
                    r.violations.len()
                );
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in &reports {
                let _ = writeln!(
                    s,
                    "p={} {}: {} pairs, {} tight, {} violations",
                    r.p,
                    r.mode,
                    r.pairs,
                    r.tight,
                    r.violations.len()
                );
                for v in &r.violations {
                    let _ = writeln!(
                        s,
                        "  violation: A={} B={} |C|={} bound={}",
                        fmt_set(&v.a),
                        fmt_set(&v.b),
                        v.c_size,
                        v.bound
                    );
                }
            }
            let _ = writeln!(
                s,
                "total: {total_pairs} pairs, {total_violations} violations"
            );
            s
        }
    };
    Ok(Outcome {
        output,
        code: if total_violations == 0 { 0 } else { 3 },
    })
}

struct CoeffRow {
    poly: &'static str,
    i: u32,
    j: u32,
    coeff: Element,
    expected: Element,
}

pub fn eh_poly(format: Format, p: u64, d: &str) -> CmdResult {
    let d = parse_list(d)?;
    let pp = build_proof_polynomials(p, &d).map_err(|e| e.to_string())?;
    let ring = pp.p_poly.ring();
    let n = pp.d.len() as u32;
    let xy = ["x", "y"];
    let mut rows = Vec::new();
    for i in 0..=n {
        rows.push(CoeffRow {
            poly: "P",
            i,
            j: n - i,
            coeff: pp.p_poly.coefficient(&[i, n - i]).expect("arity 2"),
            expected: binom_mod(n as u64, i as u64, ring),
        });
    }
    for i in 0..=n + 1 {
        rows.push(CoeffRow {
            poly: "Q",
            i,
            j: n + 1 - i,
            coeff: pp.q_poly.coefficient(&[i, n + 1 - i]).expect("arity 2"),
            expected: q_top_coefficient(n as u64, i as u64, ring),
        });
    }
    let all_match = rows.iter().all(|r| r.coeff == r.expected);
    let p_text = format_polynomial(&pp.p_poly, &xy).expect("arity 2");
    let q_text = format_polynomial(&pp.q_poly, &xy).expect("arity 2");

    let output = match format {
        Format::Json => {
            let table = |name: &str| -> Vec<Value> {
                rows.iter()
                    .filter(|r| r.poly == name)
                    .map(|r| {
                        json!({
                            "i": r.i,
                            "j": r.j,
                            "coeff": r.coeff,
                            "expected": r.expected,
                            "matches": r.coeff == r.expected,
                        })
                    })
                    .collect()
            };
            json_line(json!({
                "p": p,
                "D": pp.d,
                "P": p_text,
                "Q": q_text,
                "coeff_table": { "P": table("P"), "Q": table("Q") },
            }))
        }
        Format::Csv => {
            let mut s = String::from("poly,i,j,coeff,expected,matches\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    r.poly,
                    r.i,
                    r.j,
                    r.coeff,
                    r.expected,
                    r.coeff == r.expected
                );
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "D = {}\nP = {p_text}\nQ = {q_text}\n",
                fmt_set(&residues(&pp.d))
            );
            let _ = writeln!(s, "top coefficients (x^i y^j):");
            for r in &rows {
                let source = if r.poly == "P" {
                    format!("C({n},{})", r.i)
                } else {
                    format!("C({n},{}) - C({n},{})", r.i as i64 - 1, r.i)
                };
                let _ = writeln!(
                    s,
                    "  {} i={} j={}: {} (expected {} = {source}){}",
                    r.poly,
                    r.i,
                    r.j,
                    r.coeff,
                    r.expected,
                    if r.coeff == r.expected {
                        ""
                    } else {
                        "  MISMATCH"
                    }
                );
            }
            s
        }
    };
    Ok(Outcome {
        output,
        code: if all_match { 0 } else { 3 },
    })
}

pub fn eh_witness(format: Format, args: &EhArgs, d: &str) -> CmdResult {
    no_csv(format, "eh-witness")?;
    let a = parse_list(&args.a)?;
    let b = parse_list(&args.b)?;
    let d = parse_list(d)?;
    let w = cn_witness_for_eh(args.p, &a, &b, &d).map_err(|e| e.to_string())?;
    let sum = w.a.try_add(w.b).expect("same ring");
    let output = match format {
        Format::Json => json_line(json!({
            "p": args.p,
            "a": w.a,
            "b": w.b,
            "sum": sum,
            "k": w.k,
            "recursion_depth": w.witness.recursion_depth,
            "q_value": w.witness.value,
        })),
        _ => format!(
            "k = ({}, {})\na = {}, b = {}, a + b = {} (not in D)\nQ(a, b) = {}\nrecursion_depth: {}\n",
            w.k[0], w.k[1], w.a, w.b, sum, w.witness.value, w.witness.recursion_depth
        ),
    };
    Ok(Outcome { output, code: 0 })
}

pub fn full_sumset(format: Format, args: &EhArgs) -> CmdResult {
    no_csv(format, "full-sumset")?;
    let inst = sumset_instance(args)?;
    let r = verify_full_sumset(&inst).map_err(|e| e.to_string())?;
    let output = match format {
        Format::Json => json_line(json!({
            "p": inst.p(),
            "holds": r.holds,
            "representations": r.representations,
            "failures": r.failures,
        })),
        _ => {
            let mut s = String::new();
            for rep in &r.representations {
                let _ = writeln!(
                    s,
                    "{} = {} + {}  (|A ∩ (g - B)| = {})",
                    rep.g, rep.a, rep.b, rep.common
                );
            }
            for g in &r.failures {
                let _ = writeln!(s, "{g}: no representation");
            }
            let _ = writeln!(s, "holds: {}", r.holds);
            s
        }
    };
    Ok(Outcome {
        output,
        code: if r.holds { 0 } else { 3 },
    })
}
