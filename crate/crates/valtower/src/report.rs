//! Run configuration and tabular reports in TSV, JSON or Markdown.
//!
//! Every builder returns a [`Report`] whose `ok` flag decides the exit status of the
//! command-line frontend. Reports carry the configuration (including the seed) so a
//! run can be repeated exactly; the job count is left out because it never changes output.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{field::is_prime, parse_poly};
use crate::error::{Error, Result};
use crate::genseq::{build_tower_seq, expand, semigroup, validate, value_of, Family, GenSeq};
use crate::monomial::{det_index, euclidean_reduce, graded_presentation_rank2, smith_normal_form, Matrix2};
use crate::towers::{
    build_tower, key_comparison_precision, verify_key_comparison, verify_param_relations, verify_restriction,
    verify_stages, verify_value_comparison, Tower,
};
use crate::transforms::{expected_parity, run_tower_ladder, transform_chain, verify_round_trip, Extension};
use crate::values::Value;

pub const SCHEMA: u32 = 1;
pub const JOBS_ENV: &str = "VALTOWER_JOBS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Tsv,
    Json,
    Md,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tsv" => Ok(Format::Tsv),
            "json" => Ok(Format::Json),
            "md" | "markdown" => Ok(Format::Md),
            _ => Err(Error::BadParams(format!("unknown format {s:?} (tsv, json, md)"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub p: u64,
    pub c: u64,
    pub q: u64,
    pub levels: usize,
    pub bound: Value,
    pub precision: Option<u32>,
    pub seed: u64,
    pub samples: usize,
    #[serde(skip)]
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            p: 2,
            c: 1,
            q: 2,
            levels: 3,
            bound: Value::int(10),
            precision: None,
            seed: 0,
            samples: 200,
            format: Format::Tsv,
        }
    }
}

impl RunConfig {
    pub fn check(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::BadParams(format!("p = {} is not prime", self.p)));
        }
        let mut q = self.q;
        while q > 1 && q % self.p == 0 {
            q /= self.p;
        }
        if q != 1 {
            return Err(Error::BadParams(format!("q = {} is not a power of p = {}", self.q, self.p)));
        }
        if self.levels == 0 {
            return Err(Error::BadParams("levels must be positive".into()));
        }
        Ok(())
    }

    /// Also requires `(p - 1) | c`.
    pub fn check_tower(&self) -> Result<()> {
        self.check()?;
        if self.c == 0 || self.c % (self.p - 1) != 0 {
            return Err(Error::BadParams(format!("p - 1 = {} must divide c = {}", self.p - 1, self.c)));
        }
        Ok(())
    }

    /// Keys `0..=n` with `n` large enough for `levels` transforms.
    fn seq_len(&self) -> usize {
        self.levels.max(3) + 1
    }

    fn family_seq(&self, family: Family) -> Result<GenSeq> {
        if family == Family::U {
            self.check_tower()?;
        } else {
            self.check()?;
        }
        let gs = build_tower_seq(family, self.p, self.c, self.seq_len())?;
        Ok(if family == Family::P { gs.scaled(&Value::int(self.p as i64)) } else { gs })
    }

    fn tower(&self) -> Result<Tower> {
        self.check_tower()?;
        build_tower(self.p, self.c, self.levels + 1)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(name: &str, columns: &[&str]) -> Self {
        Table { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

macro_rules! row {
    ($($e:expr),* $(,)?) => { vec![$($e.to_string()),*] };
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub config: RunConfig,
    pub ok: bool,
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
}

impl Report {
    fn new(command: &str, config: &RunConfig) -> Self {
        Report {
            schema: SCHEMA,
            command: command.into(),
            config: config.clone(),
            ok: true,
            tables: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn header(&self) -> Vec<(&'static str, String)> {
        let c = &self.config;
        vec![
            ("schema", SCHEMA.to_string()),
            ("command", self.command.clone()),
            ("p", c.p.to_string()),
            ("c", c.c.to_string()),
            ("q", c.q.to_string()),
            ("levels", c.levels.to_string()),
            ("bound", c.bound.to_string()),
            ("precision", c.precision.map_or("auto".into(), |m| m.to_string())),
            ("samples", c.samples.to_string()),
            ("seed", c.seed.to_string()),
            ("ok", self.ok.to_string()),
        ]
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Json => {
                out = serde_json::to_string_pretty(self).expect("report serializes");
                out.push('\n');
            }
            Format::Tsv => {
                for (k, v) in self.header() {
                    let _ = writeln!(out, "# {k}\t{v}");
                }
                for t in &self.tables {
                    let _ = writeln!(out, "\n## {}", t.name);
                    let _ = writeln!(out, "{}", t.columns.join("\t"));
                    for r in &t.rows {
                        let _ = writeln!(out, "{}", r.join("\t"));
                    }
                }
                for n in &self.notes {
                    let _ = writeln!(out, "# note\t{n}");
                }
            }
            Format::Md => {
                let _ = writeln!(out, "# {}\n", self.command);
                for (k, v) in self.header() {
                    let _ = writeln!(out, "- {k}: `{v}`");
                }
                for t in &self.tables {
                    let _ = writeln!(out, "\n## {}\n", t.name);
                    let _ = writeln!(out, "| {} |", t.columns.join(" | "));
                    let _ = writeln!(out, "|{}", "---|".repeat(t.columns.len()));
                    for r in &t.rows {
                        let _ = writeln!(out, "| {} |", r.join(" | "));
                    }
                }
                if !self.notes.is_empty() {
                    let _ = writeln!(out, "\n## notes\n");
                    for n in &self.notes {
                        let _ = writeln!(out, "- {n}");
                    }
                }
            }
        }
        out
    }
}

/// `ν(f)` and the minimal term of its standard expansion.
pub fn value_report(cfg: &RunConfig, family: Family, text: &str) -> Result<Report> {
    let gs = cfg.family_seq(family)?;
    let f = parse_poly(text, gs.field)?;
    let value = value_of(&f, &gs)?;
    let exp = expand(&f, &gs)?;
    let (coeff, m) = exp.minimal_term(&gs.values)?;
    let term: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { gs.base_key_name(i) } else { format!("{}^{e}", gs.base_key_name(i)) })
        .collect();
    let term = match (coeff.is_one(), term.is_empty()) {
        (_, true) => coeff.to_string(),
        (true, false) => term.join("*"),
        (false, false) => format!("{coeff}*{}", term.join("*")),
    };
    let mut r = Report::new("value", cfg);
    let mut t = Table::new("value", &["family", "f", "value", "minimal_term", "terms"]);
    t.push(row![family, f.display_with(family.var_names().0, family.var_names().1), value, term, exp.terms.len()]);
    r.tables.push(t);
    Ok(r)
}

/// Elements of the value semigroup up to the bound.
pub fn semigroup_report(cfg: &RunConfig, family: Family) -> Result<Report> {
    let gs = cfg.family_seq(family)?;
    let sg = semigroup(&gs, &cfg.bound)?;
    let mut r = Report::new("semigroup", cfg);
    let mut g = Table::new("generators", &["i", "key", "value"]);
    for row in gs.table() {
        g.push(row![row.i, row.key, row.value]);
    }
    let mut t = Table::new("elements", &["k", "value"]);
    for (k, v) in sg.elements.iter().enumerate() {
        t.push(row![k, v]);
    }
    let mins: Vec<String> = sg.minimal_generators().iter().map(|v| v.to_string()).collect();
    r.notes.push(format!("minimal generators below the bound: {}", mins.join(", ")));
    r.tables.extend([g, t]);
    Ok(r)
}

fn validity_table(gs: &GenSeq, name: &str) -> (Table, bool, Vec<String>) {
    let rep = validate(gs);
    let mut t = Table::new(name, &["i", "key", "value", "index", "declared", "growth", "degree", "relation", "status"]);
    let opt = |o: Option<bool>| o.map_or("-".to_string(), |b| b.to_string());
    for (e, k) in rep.entries.iter().zip(gs.table()) {
        t.push(row![
            e.i,
            k.key,
            k.value,
            e.computed_index,
            e.declared_index.map_or("-".into(), |d| d.to_string()),
            opt(e.growth),
            e.degree_ok,
            opt(e.relation_ok),
            mark(e.ok())
        ]);
    }
    (t, rep.passed, rep.notes)
}

pub fn validate_report(cfg: &RunConfig, family: Family) -> Result<Report> {
    let gs = cfg.family_seq(family)?;
    let mut r = Report::new("validate", cfg);
    let (t, ok, notes) = validity_table(&gs, &format!("{family} in {}", gs.chart));
    r.ok = ok;
    r.tables.push(t);
    r.notes = notes;
    Ok(r)
}

/// Composite transforms to `levels`, with validity and the round-trip check per level.
pub fn transform_report(cfg: &RunConfig, family: Family) -> Result<Report> {
    let gs = cfg.family_seq(family)?;
    let chain = transform_chain(&gs, cfg.levels)?;
    let mut r = Report::new("transform", cfg);
    let mut rt = Table::new("round trip", &["level", "j", "key", "declared", "pulled_back", "status"]);
    let rows: Vec<_> = chain.par_iter().map(verify_round_trip).collect::<Result<Vec<_>>>()?;
    for (level_gs, level_rows) in chain.iter().zip(&rows) {
        let (t, ok, notes) = validity_table(level_gs, &format!("level {}", level_gs.level()));
        r.ok &= ok;
        r.tables.push(t);
        r.notes.extend(notes);
        for row in level_rows {
            r.ok &= row.ok();
            rt.push(row![row.level, row.j, row.key, row.declared, row.pulled_back, mark(row.ok())]);
        }
    }
    r.tables.push(rt);
    Ok(r)
}

fn ladder_table(t: &Tower, levels: usize, r: &mut Report) -> Result<()> {
    let rows = run_tower_ladder(t, levels)?;
    let mut tab = Table::new(
        "ladder",
        &["j", "extension", "a", "a_bar", "alpha", "b", "d", "beta", "defect", "expected", "status"],
    );
    let mut defects = std::collections::BTreeMap::new();
    for row in &rows {
        let (ea, eb) = expected_parity(row.j, row.extension);
        let ok = (row.form.alpha, row.form.beta) == (ea, eb) && row.defect == ea + eb;
        if !ok {
            r.notes.push(format!(
                "j = {} {}: got (alpha, beta) = ({}, {}), expected ({ea}, {eb})",
                row.j, row.extension, row.form.alpha, row.form.beta
            ));
        }
        r.ok &= ok;
        defects.insert((row.j, row.extension), row.defect);
        let f = &row.form;
        tab.push(row![
            row.j,
            row.extension,
            f.a,
            f.a_bar,
            f.alpha,
            f.b,
            f.d,
            f.beta,
            row.defect,
            format!("({ea}, {eb})"),
            mark(ok)
        ]);
    }
    for j in 1..=levels {
        let get = |e| defects.get(&(j, e)).copied().unwrap_or(u32::MAX);
        let mult = get(Extension::SOverR) == get(Extension::SOverA) + get(Extension::AOverR);
        if !mult {
            r.notes.push(format!("j = {j}: defect of S/R is not the sum of the sub-extension defects"));
        }
        r.ok &= mult;
    }
    r.tables.push(tab);
    Ok(())
}

/// The per-level `(α, β, δ)` table for `S/A`, `A/R` and `S/R`.
pub fn tower_report(cfg: &RunConfig) -> Result<Report> {
    let t = cfg.tower()?;
    let mut r = Report::new("tower", cfg);
    ladder_table(&t, cfg.levels, &mut r)?;
    Ok(r)
}

/// Index, invariant factors, substitution word and graded presentation of an exponent matrix.
pub fn monomialize_report(cfg: &RunConfig, m: &Matrix2) -> Result<Report> {
    let e = det_index(m)?;
    let snf = smith_normal_form(m)?;
    let mut r = Report::new("monomialize", cfg);
    let mut t = Table::new("index", &["matrix", "e", "snf", "status"]);
    let ok = snf.0 * snf.1 == e;
    r.ok &= ok;
    t.push(row![m, e, format!("({}, {})", snf.0, snf.1), mark(ok)]);
    r.tables.push(t);
    if m.0[0][0] > 0 && m.0[1][0] > 0 {
        let red = euclidean_reduce(m)?;
        let mut t = Table::new("reduction", &["s", "t1", "t2", "steps", "word", "s|t1-t2|", "|det|", "status"]);
        r.ok &= red.identity_ok;
        t.push(row![
            red.s,
            red.t1,
            red.t2,
            red.steps(),
            red.word_string(),
            red.s * (red.t1 - red.t2).abs(),
            red.det.abs(),
            mark(red.identity_ok)
        ]);
        r.tables.push(t);
    } else {
        r.notes.push("substitution word needs positive x-exponents in both rows".into());
    }
    if m.0.iter().flatten().all(|&x| x >= 0) {
        let pres = graded_presentation_rank2(m, 1)?;
        r.notes.push(format!("graded presentation: {}", serde_json::to_string(&pres).expect("serializes")));
    }
    Ok(r)
}

/// Every tower verification at the configured size.
pub fn suite_report(cfg: &RunConfig) -> Result<Report> {
    let t = cfg.tower()?;
    let j_max = cfg.levels;
    let mut r = Report::new("report", cfg);

    let mut st = Table::new("value-group stages", &["i", "status"]);
    for (i, ok) in verify_stages(&t, j_max + 1) {
        r.ok &= ok;
        st.push(row![i, mark(ok)]);
    }
    r.tables.push(st);

    let comparisons: Vec<_> = (1..=j_max.min(t.n - 1))
        .into_par_iter()
        .map(|j| {
            let m = match cfg.precision {
                Some(m) => m,
                None => key_comparison_precision(&t, j)?,
            };
            verify_key_comparison(&t, j, m)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut lt = Table::new("key comparison", &["j", "E", "precision", "x_order", "deg_y", "expected_deg_y", "status"]);
    for l in comparisons {
        r.ok &= l.ok;
        lt.push(row![l.j, l.exponent, l.precision, l.x_order, l.deg_y, l.expected_deg_y, mark(l.ok)]);
    }
    r.tables.push(lt);

    let mut vt = Table::new("value comparison", &["j", "nu(U)", "expected", "bound", "status"]);
    for j in 1..=j_max.min(t.n - 1) {
        let v = verify_value_comparison(&t, j)?;
        let ok = v.equality_ok && v.inequality_ok;
        r.ok &= ok;
        vt.push(row![v.j, v.nu_u, v.expected, v.bound, mark(ok)]);
    }
    r.tables.push(vt);

    let rest = verify_restriction(&t, cfg.samples, 2 * t.p as u32, cfg.seed)?;
    r.ok &= rest.mismatches.is_empty();
    let mut rt = Table::new("restriction", &["samples", "checked", "mismatches"]);
    rt.push(row![rest.samples, rest.checked, rest.mismatches.len()]);
    for m in rest.mismatches.iter().take(5) {
        r.notes.push(format!("restriction mismatch: g = {}, A: {}, S: {}", m.g, m.in_a, m.in_s));
    }
    r.tables.push(rt);

    let mut pt = Table::new("parameter relations", &["j", "relation", "lhs", "rhs", "factor", "residue", "status"]);
    for j in 1..j_max {
        let rep = verify_param_relations(&t, j)?;
        for c in rep.checks {
            r.ok &= c.ok;
            pt.push(row![j, c.relation, c.lhs, c.rhs, c.factor, c.residue.unwrap_or_else(|| "-".into()), mark(c.ok)]);
        }
    }
    r.tables.push(pt);

    ladder_table(&t, j_max, &mut r)?;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_cli_examples() {
        let cfg = RunConfig::default();
        let v = |fam, s| value_report(&cfg, fam, s).unwrap().tables[0].rows[0][2].clone();
        assert_eq!(v(Family::U, "v"), "1/2");
        assert_eq!(v(Family::Q, "x"), "1");
        assert_eq!(v(Family::Q, "y^4"), "1");
    }

    #[test]
    fn formats_carry_header() {
        let cfg = RunConfig { seed: 7, ..RunConfig::default() };
        let r = monomialize_report(&cfg, &Matrix2::new(2, 1, 1, 3)).unwrap();
        assert!(r.ok);
        assert!(r.render(Format::Tsv).contains("# seed\t7"));
        assert!(r.render(Format::Md).contains("| (2 1; 1 3) | 5 | (1, 5) | pass |"));
        let j: serde_json::Value = serde_json::from_str(&r.render(Format::Json)).unwrap();
        assert_eq!(j["schema"], 1);
        assert_eq!(j["config"]["seed"], 7);
    }

    #[test]
    fn tower_rejects_bad_c() {
        let cfg = RunConfig { p: 3, c: 1, q: 3, ..RunConfig::default() };
        assert!(matches!(tower_report(&cfg), Err(Error::BadParams(_))));
        let cfg = RunConfig { p: 2, c: 2, levels: 2, ..RunConfig::default() };
        assert!(tower_report(&cfg).unwrap().ok);
    }
}
