//! Parameter sweeps over a scenario template.
//!
//! String values of the template may contain `{expr}` placeholders, where `expr` is an
//! integer expression over the varied keys (`+ - * ^`, parentheses).

use std::collections::BTreeSet;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::Value;

use crate::scenario::{self, RunOptions, Summary};
use crate::CliError;

pub const CSV_COLUMNS: [&str; 11] = [
    "scenario_id",
    "p",
    "d",
    "n",
    "v_p_n",
    "lifting_exponent",
    "status",
    "delta_swan",
    "bk_bound",
    "certificate",
    "runtime_ms",
];

/// One `--vary key=spec` argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vary {
    pub key: String,
    pub values: Vec<i64>,
}

/// Parses `key=a..b` (inclusive), `key=a,b,c` or `key=a`.
pub fn parse_vary(s: &str) -> Result<Vary, CliError> {
    let bad = || CliError::Schema(format!("invalid --vary {s:?}; expected key=a..b or key=a,b,c"));
    let (key, spec) = s.split_once('=').ok_or_else(bad)?;
    let key = key.trim();
    if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(bad());
    }
    let values = if let Some((a, b)) = spec.split_once("..") {
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        (a..=b).collect()
    } else {
        let mut vs = spec
            .split(',')
            .map(|v| v.trim().parse::<i64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        vs.sort_unstable();
        vs.dedup();
        vs
    };
    Ok(Vary { key: key.to_string(), values })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Num(i64),
    Ident(usize, usize),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, String> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Num(s[st..i].parse().map_err(|_| format!("number too large in {s:?}"))?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push(Tok::Ident(st, i));
        } else if "+-*^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(format!("unexpected {c:?} in placeholder {s:?}"));
        }
    }
    Ok(out)
}

struct Eval<'a> {
    src: &'a str,
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a [(String, i64)],
}

impl Eval<'_> {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).copied()
    }

    fn overflow(&self) -> String {
        format!("overflow in placeholder {:?}", self.src)
    }

    fn sum(&mut self) -> Result<i64, String> {
        let mut acc = self.product()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek() {
            self.pos += 1;
            let r = self.product()?;
            acc = if c == '+' { acc.checked_add(r) } else { acc.checked_sub(r) }.ok_or_else(|| self.overflow())?;
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<i64, String> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op('*')) = self.peek() {
            self.pos += 1;
            let r = self.unary()?;
            acc = acc.checked_mul(r).ok_or_else(|| self.overflow())?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<i64, String> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<i64, String> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let e = self.unary()?;
            let e = u32::try_from(e).map_err(|_| format!("negative exponent in {:?}", self.src))?;
            return base.checked_pow(e).ok_or_else(|| self.overflow());
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<i64, String> {
        let t = self.peek().ok_or_else(|| format!("unexpected end of placeholder {:?}", self.src))?;
        self.pos += 1;
        match t {
            Tok::Num(n) => Ok(n),
            Tok::Ident(a, b) => {
                let name = &self.src[a..b];
                self.vars
                    .iter()
                    .find(|(k, _)| k == name)
                    .map(|(_, v)| *v)
                    .ok_or_else(|| format!("unknown key {name:?} in placeholder"))
            }
            Tok::Op('(') => {
                let v = self.sum()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(v)
                    }
                    _ => Err(format!("missing ')' in placeholder {:?}", self.src)),
                }
            }
            Tok::Op(c) => Err(format!("unexpected {c:?} in placeholder {:?}", self.src)),
        }
    }
}

/// Evaluates an integer placeholder expression.
pub fn eval_placeholder(src: &str, vars: &[(String, i64)]) -> Result<i64, String> {
    let mut e = Eval { src, toks: lex(src)?, pos: 0, vars };
    let v = e.sum()?;
    if e.pos != e.toks.len() {
        return Err(format!("trailing input in placeholder {src:?}"));
    }
    Ok(v)
}

fn substitute_str(s: &str, vars: &[(String, i64)]) -> Result<String, String> {
    let mut out = String::new();
    let mut rest = s;
    while let Some(i) = rest.find('{') {
        out.push_str(&rest[..i]);
        let j = rest[i..].find('}').ok_or_else(|| format!("unclosed placeholder in {s:?}"))? + i;
        out.push_str(&eval_placeholder(&rest[i + 1..j], vars)?.to_string());
        rest = &rest[j + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

/// Replaces every placeholder in the string values of `v`.
pub fn substitute(v: &Value, vars: &[(String, i64)]) -> Result<Value, String> {
    Ok(match v {
        Value::String(s) => Value::String(substitute_str(s, vars)?),
        Value::Array(a) => Value::Array(a.iter().map(|x| substitute(x, vars)).collect::<Result<_, _>>()?),
        Value::Object(o) => Value::Object(
            o.iter()
                .map(|(k, x)| Ok((k.clone(), substitute(x, vars)?)))
                .collect::<Result<_, String>>()?,
        ),
        other => other.clone(),
    })
}

fn placeholder_keys(v: &Value, out: &mut BTreeSet<String>) {
    match v {
        Value::String(s) => {
            let mut rest = s.as_str();
            while let Some(i) = rest.find('{') {
                let Some(j) = rest[i..].find('}') else { break };
                if let Ok(toks) = lex(&rest[i + 1..i + j]) {
                    for t in toks {
                        if let Tok::Ident(a, b) = t {
                            out.insert(rest[i + 1..i + j][a..b].to_string());
                        }
                    }
                }
                rest = &rest[i + j + 1..];
            }
        }
        Value::Array(a) => a.iter().for_each(|x| placeholder_keys(x, out)),
        Value::Object(o) => o.values().for_each(|x| placeholder_keys(x, out)),
        _ => {}
    }
}

#[derive(Debug, Clone)]
pub struct ScanOptions {
    pub run: RunOptions,
    pub jobs: usize,
    pub keep_going: bool,
    pub strict: bool,
    pub timing: bool,
}

#[derive(Debug, Clone)]
pub struct ScanRow {
    pub scenario_id: String,
    pub result: Result<Summary, CliError>,
    pub runtime_ms: Option<u128>,
}

/// Combinations in lexicographic order of the sorted keys.
pub fn combinations(varies: &[Vary]) -> Vec<Vec<(String, i64)>> {
    let mut sorted: Vec<&Vary> = varies.iter().collect();
    sorted.sort_by(|a, b| a.key.cmp(&b.key));
    let mut out: Vec<Vec<(String, i64)>> = vec![vec![]];
    for v in sorted {
        let mut values = v.values.clone();
        values.sort_unstable();
        out = out
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |x| {
                    let mut c = prefix.clone();
                    c.push((v.key.clone(), *x));
                    c
                })
            })
            .collect();
    }
    out
}

fn run_one(template: &Value, base_id: &str, vars: &[(String, i64)], opts: &ScanOptions) -> ScanRow {
    let tag: Vec<String> = vars.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let scenario_id = if tag.is_empty() { base_id.to_string() } else { format!("{base_id}[{}]", tag.join(",")) };
    let start = Instant::now();
    let result = substitute(template, vars)
        .map_err(CliError::Schema)
        .and_then(|v| scenario::parse_scenario(&v.to_string()))
        .and_then(|sc| scenario::run_scenario(&sc, &opts.run))
        .map(|o| o.summary);
    let runtime_ms = opts.timing.then(|| start.elapsed().as_millis());
    ScanRow { scenario_id, result, runtime_ms }
}

/// Runs every combination; rows come back in combination order regardless of `jobs`.
pub fn scan(template_text: &str, varies: &[Vary], opts: &ScanOptions) -> Result<Vec<ScanRow>, CliError> {
    let template: Value = serde_json::from_str(template_text)
        .map_err(|e| CliError::Schema(format!("template line {} column {}: {e}", e.line(), e.column())))?;
    let mut used = BTreeSet::new();
    placeholder_keys(&template, &mut used);
    for v in varies {
        if !used.contains(&v.key) {
            return Err(CliError::Schema(format!("varied key {:?} does not occur in the template", v.key)));
        }
    }
    let mut keys: Vec<&str> = varies.iter().map(|v| v.key.as_str()).collect();
    keys.sort_unstable();
    if keys.windows(2).any(|w| w[0] == w[1]) {
        return Err(CliError::Schema("a key is varied twice".into()));
    }
    if let Some(missing) = used.iter().find(|k| !keys.contains(&k.as_str())) {
        return Err(CliError::Schema(format!("placeholder key {missing:?} is not varied")));
    }
    let base_id = template.get("id").and_then(Value::as_str).unwrap_or("scenario").to_string();
    let combos = combinations(varies);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| CliError::Precondition(e.to_string()))?;
    let rows: Vec<ScanRow> =
        pool.install(|| combos.par_iter().map(|c| run_one(&template, &base_id, c, opts)).collect());
    Ok(rows)
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(ToString::to_string).unwrap_or_default()
}

/// Writes the CSV; `rows` must already be in output order.
pub fn write_csv<W: std::io::Write>(rows: &[ScanRow], w: W) -> Result<(), CliError> {
    let mut wr = csv::Writer::from_writer(w);
    let io = |e: csv::Error| CliError::Precondition(format!("writing CSV: {e}"));
    wr.write_record(CSV_COLUMNS).map_err(io)?;
    for r in rows {
        let rec: Vec<String> = match &r.result {
            Ok(s) => vec![
                r.scenario_id.clone(),
                opt(&s.p),
                opt(&s.d),
                opt(&s.n),
                opt(&s.v_p_n),
                opt(&s.lifting_exponent),
                opt(&s.status),
                opt(&s.delta_swan),
                opt(&s.bk_bound),
                opt(&s.certificate),
                opt(&r.runtime_ms),
            ],
            Err(e) => {
                let mut v = vec![String::new(); CSV_COLUMNS.len()];
                v[0] = r.scenario_id.clone();
                v[6] = "Error".into();
                v[9] = e.to_string();
                v[10] = opt(&r.runtime_ms);
                v
            }
        };
        wr.write_record(&rec).map_err(io)?;
    }
    wr.flush().map_err(|e| CliError::Precondition(format!("writing CSV: {e}")))?;
    Ok(())
}

/// Exit status for a finished scan: the first error in row order wins, then `--strict`.
pub fn scan_status(rows: &[ScanRow], opts: &ScanOptions) -> Result<(), CliError> {
    let failed: Vec<&ScanRow> = rows.iter().filter(|r| r.result.is_err()).collect();
    if let Some(first) = failed.first() {
        let Err(e) = &first.result else { unreachable!() };
        if !opts.keep_going {
            return Err(e.clone());
        }
        return Err(CliError::Precondition(format!(
            "{} of {} scenarios failed, first {}",
            failed.len(),
            rows.len(),
            first.scenario_id
        )));
    }
    if opts.strict && rows.iter().any(|r| matches!(&r.result, Ok(s) if s.status == Some(splitred::status::SplitStatus::Inconclusive))) {
        return Err(CliError::Strict);
    }
    Ok(())
}

/// Rows up to and including the first error, unless `keep_going`.
pub fn truncate_at_error(rows: Vec<ScanRow>, keep_going: bool) -> Vec<ScanRow> {
    if keep_going {
        return rows;
    }
    let mut out = Vec::new();
    for r in rows {
        let stop = r.result.is_err();
        out.push(r);
        if stop {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(v: &[(&str, i64)]) -> Vec<(String, i64)> {
        v.iter().map(|(k, x)| (k.to_string(), *x)).collect()
    }

    #[test]
    fn placeholders() {
        let vs = vars(&[("d", 3), ("m", 1)]);
        assert_eq!(eval_placeholder("2^m", &vs).unwrap(), 2);
        assert_eq!(eval_placeholder("2*d+1", &vs).unwrap(), 7);
        assert_eq!(eval_placeholder("-(d - 5)", &vs).unwrap(), 2);
        assert_eq!(substitute_str("pi_L^4*(1+pi_L^{2^m})", &vs).unwrap(), "pi_L^4*(1+pi_L^2)");
        assert!(eval_placeholder("x", &vs).is_err());
    }

    #[test]
    fn vary_specs() {
        assert_eq!(parse_vary("d=2..6").unwrap().values, vec![2, 3, 4, 5, 6]);
        assert_eq!(parse_vary("m=1,0").unwrap().values, vec![0, 1]);
        assert!(parse_vary("d=5..4").unwrap().values.is_empty());
        assert!(parse_vary("d").is_err());
    }

    #[test]
    fn combination_order() {
        let c = combinations(&[
            Vary { key: "m".into(), values: vec![1, 0] },
            Vary { key: "d".into(), values: vec![3, 2] },
        ]);
        let tags: Vec<String> = c.iter().map(|v| format!("{}{}", v[0].1, v[1].1)).collect();
        assert_eq!(tags, ["20", "21", "30", "31"]);
    }
}
