//! The regression corpus: a fixed set of modules, pairwise Ext checks against
//! fixtures, duality and Euler checks, twist round trips, seeded direct sums
//! and the symbolic verifiers, aggregated into a pass/fail matrix.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homalg::{dims_i64, euler_form_p2, euler_form_y, ext_dims_p2, ext_dims_y, verify_pushforward_triangle};
use crate::oricalc::{verify_cocycle, verify_square_root, verify_theorem3, verify_theorem4};
use crate::rep::{
    direct_sum, find_isomorphism, p2_restrict, point_module, pushforward_module, simple_module, QuiverModule,
    Representation,
};
use crate::scalar::{rat, ratio, ScalarMode};
use crate::windows::{twist_down, twist_up, window_membership, TwistDirection};

pub const DEFAULT_PRIME: u64 = 2_147_483_659;
pub const DEFAULT_SEED: u64 = 20_240_101;
pub const DEFAULT_SUM_PAIRS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub mode: ScalarMode,
    pub range: (i64, i64),
    pub seed: u64,
    pub format: OutputFormat,
    pub sum_pairs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: ScalarMode::Rational,
            range: (-8, 8),
            seed: DEFAULT_SEED,
            format: OutputFormat::Text,
            sum_pairs: DEFAULT_SUM_PAIRS,
        }
    }
}

impl RunConfig {
    /// The other scalar mode, used for the mode-agreement cells.
    fn partner_mode(&self) -> ScalarMode {
        match self.mode {
            ScalarMode::Rational => ScalarMode::Prime(DEFAULT_PRIME),
            ScalarMode::Prime(_) => ScalarMode::Rational,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CorpusObject {
    pub name: String,
    pub rep: Representation,
}

fn object(name: &str, rep: Result<Representation>) -> CorpusObject {
    CorpusObject { name: name.to_string(), rep: rep.expect("corpus constructors are valid") }
}

/// Points on and off the zero section, the vertex simples and two
/// pushforwards, all in heart 0.
pub fn corpus_objects() -> Vec<CorpusObject> {
    vec![
        object("pt_origin", point_module([rat(1), rat(0), rat(0)], rat(0), 0)),
        object("pt_diag", point_module([rat(1), rat(1), rat(1)], rat(1), 0)),
        object("pt_generic", point_module([rat(1), rat(2), rat(3)], ratio(1, 2), 0)),
        object("S0", simple_module(0, 0)),
        object("S1", simple_module(1, 0)),
        object("S2", simple_module(2, 0)),
        object("O1", pushforward_module(1, 0)),
        object("O2", pushforward_module(2, 0)),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtFixture {
    pub left: String,
    pub right: String,
    pub side: String,
    pub expected: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixtures {
    pub ext: Vec<ExtFixture>,
}

impl Fixtures {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fixtures serialise")
    }
}

fn fx(left: &str, right: &str, side: &str, expected: &[usize]) -> ExtFixture {
    ExtFixture { left: left.into(), right: right.into(), side: side.into(), expected: expected.to_vec() }
}

/// Hand-checked Ext dimensions of corpus pairs.
pub fn default_fixtures() -> Fixtures {
    Fixtures {
        ext: vec![
            fx("pt_origin", "pt_origin", "y", &[1, 3, 3, 1]),
            fx("pt_generic", "pt_generic", "y", &[1, 3, 3, 1]),
            fx("pt_origin", "pt_diag", "y", &[0, 0, 0, 0]),
            fx("pt_diag", "pt_generic", "y", &[0, 0, 0, 0]),
            fx("S0", "S0", "y", &[1, 0, 0, 1]),
            fx("O1", "O1", "y", &[1, 0, 0, 1]),
            fx("O2", "O2", "y", &[1, 0, 0, 1]),
            fx("S0", "O1", "y", &[3, 0, 0, 0]),
            fx("O1", "S0", "y", &[0, 0, 0, 3]),
            fx("S0", "O2", "y", &[6, 0, 0, 0]),
            fx("S0", "S1", "y", &[0, 0, 3, 0]),
            fx("S1", "S0", "y", &[0, 3, 0, 0]),
            fx("S0", "pt_origin", "y", &[1, 1, 0, 0]),
            fx("pt_generic", "O1", "y", &[0, 0, 0, 0]),
            fx("pt_origin", "pt_origin", "p2", &[1, 2, 1]),
            fx("S0", "S0", "p2", &[1, 0, 0]),
            fx("O1", "O1", "p2", &[1, 0, 0]),
        ],
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub family: String,
    pub subject: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusReport {
    pub version: &'static str,
    pub conventions: BTreeMap<&'static str, &'static str>,
    pub config: RunConfig,
    pub cells: Vec<Cell>,
}

impl CorpusReport {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Cell> {
        self.cells.iter().filter(|c| !c.passed).collect()
    }

    /// Per-family pass counts followed by every failing cell.
    pub fn to_table(&self) -> String {
        let mut families: Vec<(&str, usize, usize)> = Vec::new();
        for c in &self.cells {
            match families.iter_mut().find(|(f, _, _)| *f == c.family) {
                Some(entry) => {
                    entry.1 += c.passed as usize;
                    entry.2 += 1;
                }
                None => families.push((&c.family, c.passed as usize, 1)),
            }
        }
        let mut out = format!("corpus run ({}, seed {})\n", self.config.mode, self.config.seed);
        for (f, ok, total) in families {
            let mark = if ok == total { "pass" } else { "FAIL" };
            out.push_str(&format!("  {f:<22} {ok:>4}/{total:<4} {mark}\n"));
        }
        for c in self.failures() {
            out.push_str(&format!("  failing cell: {} [{}]: {}\n", c.family, c.subject, c.detail));
        }
        out
    }
}

struct Recorder {
    cells: Vec<Cell>,
}

impl Recorder {
    fn push(&mut self, family: &str, subject: String, outcome: Result<(bool, String)>) -> Result<()> {
        let (passed, detail) = match outcome {
            Ok(x) => x,
            Err(e) if e.is_internal() => return Err(e),
            Err(e) => (false, e.to_string()),
        };
        self.cells.push(Cell { family: family.to_string(), subject, passed, detail });
        Ok(())
    }
}

fn find<'a>(objs: &'a [CorpusObject], name: &str) -> Result<&'a Representation> {
    objs.iter()
        .find(|o| o.name == name)
        .map(|o| &o.rep)
        .ok_or_else(|| Error::Parse(format!("fixture names unknown corpus object {name:?}")))
}

fn fixture_cell(objs: &[CorpusObject], f: &ExtFixture, mode: ScalarMode) -> Result<(bool, String)> {
    let (m, n) = (find(objs, &f.left)?, find(objs, &f.right)?);
    let got = match f.side.as_str() {
        "y" => ext_dims_y(m, n, mode)?.dims,
        "p2" => ext_dims_p2(&p2_restrict(m), &p2_restrict(n), mode)?.dims,
        other => return Err(Error::Parse(format!("unknown side {other:?}"))),
    };
    Ok((got == f.expected, format!("expected {:?}, got {got:?}", f.expected)))
}

/// Duality, Euler and mode-agreement cells for one ordered pair.
fn pair_cells(rec: &mut Recorder, subject: &str, m: &Representation, n: &Representation, cfg: &RunConfig) -> Result<()> {
    let fwd = ext_dims_y(m, n, cfg.mode)?;
    let bwd = ext_dims_y(n, m, cfg.mode)?;
    let dual = (0..4).all(|i| fwd.dims[i] == bwd.dims[3 - i]);
    rec.push("cy3", subject.into(), Ok((dual, format!("{:?} vs {:?}", fwd.dims, bwd.dims))))?;

    let chi = euler_form_y(dims_i64(m.dims()), dims_i64(n.dims()));
    rec.push("euler_y", subject.into(), Ok((chi == fwd.alternating_sum(), format!("closed form {chi}, ext {:?}", fwd.dims))))?;

    let (pm, pn) = (p2_restrict(m), p2_restrict(n));
    let p2 = ext_dims_p2(&pm, &pn, cfg.mode)?;
    let chi_p2 = euler_form_p2(dims_i64(m.dims()), dims_i64(n.dims()));
    rec.push("euler_p2", subject.into(), Ok((chi_p2 == p2.alternating_sum(), format!("closed form {chi_p2}, ext {:?}", p2.dims))))?;

    let other = cfg.partner_mode();
    let agree = ext_dims_y(m, n, other)? == fwd && ext_dims_p2(&pm, &pn, other)? == p2;
    rec.push("mode_agreement", subject.into(), Ok((agree, format!("{} vs {other}", cfg.mode))))
}

fn round_trip(m: &Representation) -> Result<(bool, String)> {
    let mut notes = Vec::new();
    let mut ok = true;
    for dir in [TwistDirection::Up, TwistDirection::Down] {
        if !window_membership(m, dir)?.member {
            notes.push(format!("{dir:?}: not a member"));
            continue;
        }
        let (there, back) = match dir {
            TwistDirection::Up => {
                let t = twist_up(m)?;
                let b = twist_down(&t)?;
                (t, b)
            }
            TwistDirection::Down => {
                let t = twist_down(m)?;
                let b = twist_up(&t)?;
                (t, b)
            }
        };
        let iso = back.heart() == m.heart() && find_isomorphism(m, &back)?.is_some();
        ok &= iso;
        notes.push(format!("{dir:?}: {:?} -> {:?}, iso {iso}", m.dims(), there.dims()));
    }
    Ok((ok, notes.join("; ")))
}

/// Random direct sums of small corpus members; the seed fixes everything.
pub fn seeded_sum_pairs(seed: u64, count: usize) -> Vec<(Representation, Representation)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> Representation {
        match rng.gen_range(0..5) {
            0 => {
                let x = [rng.gen_range(0..4), rng.gen_range(-2..3), rng.gen_range(-2..3)];
                let x = if x == [0, 0, 0] { [1, 0, 0] } else { x };
                let t = ratio(rng.gen_range(-3..4), rng.gen_range(1..4));
                point_module(x.map(rat), t, 0).expect("nonzero point")
            }
            1 => simple_module(0, 0).expect("vertex"),
            2 => simple_module(1, 0).expect("vertex"),
            3 => simple_module(2, 0).expect("vertex"),
            _ => pushforward_module(1, 0).expect("heart in range"),
        }
    };
    (0..count)
        .map(|_| {
            let a = direct_sum(&draw(&mut rng), &draw(&mut rng)).expect("same heart");
            let b = direct_sum(&draw(&mut rng), &draw(&mut rng)).expect("same heart");
            (a, b)
        })
        .collect()
}

pub fn run_corpus(cfg: &RunConfig, fixtures: &Fixtures) -> Result<CorpusReport> {
    let objs = corpus_objects();
    let mut rec = Recorder { cells: Vec::new() };

    for f in &fixtures.ext {
        let subject = format!("{}({}, {})", f.side, f.left, f.right);
        rec.push("ext_fixture", subject, fixture_cell(&objs, f, cfg.mode))?;
    }

    for a in &objs {
        for b in &objs {
            pair_cells(&mut rec, &format!("{}, {}", a.name, b.name), &a.rep, &b.rep, cfg)?;
        }
    }

    for (i, (m, n)) in seeded_sum_pairs(cfg.seed, cfg.sum_pairs).iter().enumerate() {
        pair_cells(&mut rec, &format!("sum#{i}"), m, n, cfg)?;
    }

    for o in &objs {
        let tri = verify_pushforward_triangle(&o.rep, cfg.mode);
        rec.push("triangle", o.name.clone(), tri.map(|t| (t.holds, format!("y {:?}, p2 {:?}", t.y.dims, t.p2.dims))))?;
        rec.push("twist_round_trip", o.name.clone(), round_trip(&o.rep))?;
    }

    let twistable: Vec<(&CorpusObject, Representation)> =
        objs.iter().filter_map(|o| twist_up(&o.rep).ok().map(|t| (o, t))).collect();
    for (a, ta) in &twistable {
        for (b, tb) in &twistable {
            let outcome = (|| {
                let before = ext_dims_y(&a.rep, &b.rep, cfg.mode)?;
                let after = ext_dims_y(ta, tb, cfg.mode)?;
                Ok((before.dims == after.dims, format!("{:?} vs {:?}", before.dims, after.dims)))
            })();
            rec.push("twist_ext_invariance", format!("{}, {}", a.name, b.name), outcome)?;
        }
    }
    let s0 = find(&objs, "S0")?;
    let refusal = match twist_up(s0) {
        Err(Error::Membership { diagnostics, .. }) => (diagnostics.contains("κ₁"), diagnostics),
        Err(e) => (false, e.to_string()),
        Ok(_) => (false, "S0 twisted up".into()),
    };
    rec.push("twist_refusal", "S0 up".into(), Ok(refusal))?;

    let (lo, hi) = cfg.range;
    for report in [verify_theorem3(lo, hi), verify_theorem4(lo, hi), verify_square_root(lo, hi), verify_cocycle(lo, hi)] {
        match report {
            Ok(r) => {
                let detail = format!("{} diff entries", r.diff.len());
                rec.push("identity", r.identity.clone(), Ok((r.passed(), detail)))?;
            }
            Err(e) => rec.push("identity", "range".into(), Err(e))?,
        }
    }

    Ok(CorpusReport { version: crate::VERSION, conventions: crate::conventions(), config: cfg.clone(), cells: rec.cells })
}
