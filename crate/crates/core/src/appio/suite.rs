//! The acceptance suite, shared by the `verify-all` subcommand and the
//! `acceptance` test target. Each criterion returns one pass/fail line.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use itertools::Itertools;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::appio::corpus::{self, iterated_cable, random_word};
use crate::appio::file::CurveFile;
use crate::appio::render::{render_svg, RenderOptions, View};
use crate::cabling::{cable_geometric, cable_merge, cable_merge_with, torus_knot_curve, CableParams};
use crate::geometry::{homotopic, pull_tight, realize, word_from_curve, Multicurve, PLCurve, Point, Q};
use crate::invariants::{
    alexander, detect_lspace, epsilon, lspace_cable_check, phi_table, report, tau, torus_alexander,
    verify_against,
};
use crate::loopcalc::{Letter, LoopWord};
use crate::merge::{merge, merge_geometric};
use crate::obstructions::{arc_length_bound, check_cable, obstruction_report, Verdict};

pub const GRID: [(i64, i64); 7] = [(2, 1), (2, -1), (2, 3), (3, 2), (3, 4), (3, -2), (5, 2)];

pub const GOLDEN_ENV: &str = "CABLE_CURVES_GOLDEN_DIR";
pub const UPDATE_ENV: &str = "CABLE_CURVES_UPDATE_GOLDEN";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let status = if self.pass { "PASS" } else { "FAIL" };
        format!("[{status}] {}. {}: {}", self.id, self.name, self.detail)
    }
}

/// Collects failures for one criterion.
struct Tally {
    checked: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Self { checked: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self, id: u8, name: &'static str) -> CriterionResult {
        let detail = if self.failures.is_empty() {
            format!("{} checks", self.checked)
        } else {
            format!(
                "{} of {} checks failed; first: {}",
                self.failures.len(),
                self.checked,
                self.failures.iter().take(3).join("; ")
            )
        };
        CriterionResult { id, name, pass: self.failures.is_empty(), detail }
    }
}

/// The five base curves used with the parameter grid.
pub fn base_corpus() -> Vec<(&'static str, Multicurve)> {
    corpus::corpus().into_iter().take(5).collect()
}

pub fn route_equivalence() -> CriterionResult {
    let mut t = Tally::new();
    for (name, k) in base_corpus() {
        for (p, q) in GRID {
            let g = cable_geometric(&k, p, q);
            let m = cable_merge(&k, p, q);
            match (g, m) {
                (Ok(g), Ok(m)) => {
                    t.check(g.curve.word_set() == m.curve.word_set(), || format!("{name} ({p},{q})"))
                }
                (g, m) => t.check(false, || format!("{name} ({p},{q}): {:?} {:?}", g.err(), m.err())),
            }
        }
    }
    t.finish(1, "route equivalence")
}

pub fn tau_epsilon() -> CriterionResult {
    let mut t = Tally::new();
    for (name, k) in base_corpus() {
        for (p, q) in GRID {
            let cable = match cable_geometric(&k, p, q) {
                Ok(c) => c.curve,
                Err(e) => {
                    t.check(false, || format!("{name} ({p},{q}): {e}"));
                    continue;
                }
            };
            for c in verify_against(&k, &cable, p, q) {
                if c.name == "tau" || c.name == "epsilon" {
                    t.check(c.pass, || format!("{name} ({p},{q}) {}: {} vs {}", c.name, c.lhs, c.rhs));
                }
            }
        }
    }
    for (p, q) in GRID.iter().copied().chain([(2, -5), (3, -4), (4, 3)]) {
        let torus = torus_knot_curve(p, q).expect("valid grid");
        let expected = q.signum() * (p - 1) * (q.abs() - 1) / 2;
        t.check(tau(&torus) == expected, || format!("tau T({p},{q}) = {}", tau(&torus)));
        // T(p, ±1) is the unknot
        let eps = if q.abs() > 1 { q.signum() } else { 0 };
        t.check(epsilon(&torus) == eps, || format!("epsilon T({p},{q}) = {}", epsilon(&torus)));
    }
    t.finish(2, "tau and epsilon of cables")
}

pub fn phi_under_21() -> CriterionResult {
    let mut t = Tally::new();
    for (name, k) in base_corpus() {
        let cable = cable_geometric(&k, 2, 1).expect("(2, 1) is valid").curve;
        for c in verify_against(&k, &cable, 2, 1) {
            if c.name.starts_with("phi") || c.name.starts_with("unique") {
                t.check(c.pass, || format!("{name} {}: {} vs {}", c.name, c.lhs, c.rhs));
            }
        }
    }
    let mut k = corpus::right_trefoil();
    for n in 0..=5u32 {
        if n > 0 {
            k = cable_geometric(&k, 2, 1).expect("(2, 1) is valid").curve;
        }
        let phi = phi_table(&k);
        let target = 2i64.pow(n);
        t.check(phi.phi(target) == 1, || format!("phi_{target}(K_{n}) = {}", phi.phi(target)));
        for (&i, &v) in &phi.phi {
            t.check((v == 1) == (i == target), || format!("phi_{i}(K_{n}) = {v}"));
        }
    }
    t.finish(3, "phi under (2,1) cabling")
}

pub fn lspace() -> CriterionResult {
    let mut t = Tally::new();
    let trefoil = corpus::right_trefoil();
    let c34 = cable_geometric(&trefoil, 3, 4).expect("valid").curve;
    let c32 = cable_geometric(&trefoil, 3, 2).expect("valid").curve;
    t.check(detect_lspace(&c34).is_some(), || "trefoil (3,4) not detected".into());
    t.check(detect_lspace(&c32).is_none(), || "trefoil (3,2) detected".into());
    for (name, k) in base_corpus() {
        for (p, q) in GRID {
            match lspace_cable_check(&k, p, q) {
                Ok(v) => t.check(v.agree(), || format!("{name} ({p},{q}): {}", v.explanation)),
                Err(_) => {
                    // not an L-space companion: its cables never are
                    let c = cable_geometric(&k, p, q).expect("valid").curve;
                    t.check(detect_lspace(&c).is_none(), || format!("{name} ({p},{q}) detected"));
                }
            }
        }
    }
    t.finish(4, "L-space cables")
}

pub fn alexander_product() -> CriterionResult {
    let mut t = Tally::new();
    for (name, k) in base_corpus() {
        for (p, q) in GRID {
            let cable = cable_geometric(&k, p, q).expect("valid").curve;
            let lhs = alexander(&cable);
            let rhs = alexander(&k).substitute_power(p).mul(&torus_alexander(p, q));
            t.check(lhs == rhs, || format!("{name} ({p},{q}): {lhs} vs {rhs}"));
        }
    }
    let closed_form = torus_alexander(2, 3);
    let crossings = alexander(&torus_knot_curve(2, 3).expect("valid"));
    t.check(closed_form.to_string() == "t - 1 + t^-1", || format!("closed form {closed_form}"));
    t.check(crossings == closed_form, || format!("crossing count {crossings}"));
    t.finish(5, "Alexander polynomial of cables")
}

pub fn obstruction_soundness() -> CriterionResult {
    let mut t = Tally::new();
    for (name, k) in base_corpus() {
        for (p, q) in GRID {
            let cable = cable_geometric(&k, p, q).expect("valid").curve;
            let e = check_cable(&cable, p);
            t.check(e.verdict == Verdict::Possible, || format!("{name} ({p},{q}) obstructed: {e:?}"));
        }
    }
    let fig8 = corpus::figure_eight();
    for p in 2..=8 {
        t.check(check_cable(&fig8, p).verdict == Verdict::Obstructed, || format!("figure eight p={p}"));
    }
    let synthetic = corpus::synthetic_obstruction();
    for p in 2..=3 {
        t.check(check_cable(&synthetic, p).verdict == Verdict::Obstructed, || format!("synthetic p={p}"));
    }
    t.check(arc_length_bound(&synthetic) == Some(3), || "synthetic p_max".into());
    t.finish(6, "obstruction soundness")
}

fn detour(c: &PLCurve, at: usize, dx: Q, dy: Q) -> PLCurve {
    let mut pts = c.waypoints.clone();
    let w = pts[at];
    pts.splice(at + 1..at + 1, [Point::new(w.x + dx, w.y + dy), w]);
    PLCurve::new(pts, c.period)
}

fn normalized(ws: &[LoopWord]) -> Vec<String> {
    ws.iter().map(|w| w.normalize().to_string()).sorted().collect()
}

fn random_c_word(rng: &mut ChaCha8Rng) -> LoopWord {
    let len = rng.gen_range(1..=4);
    LoopWord::new((0..len).map(|_| Letter::c(rng.gen_range(-3..=3))).collect()).expect("c-words are valid")
}

/// Half-turn image of a multicurve, reassembled.
pub fn involution(k: &Multicurve) -> crate::error::Result<Multicurve> {
    let closed: Vec<_> = k
        .closed
        .iter()
        .map(|c| (c.curve().half_turn(), c.local_system().cloned()))
        .collect();
    Ok(Multicurve::from_curves(&k.gamma0.curve().half_turn(), &closed)?.0)
}

pub fn property_suites() -> CriterionResult {
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut words = 0;
    while words < 200 {
        let w = random_word(&mut rng, 12);
        words += 1;
        let c = realize(&w, (0, 0));
        let back = word_from_curve(&c);
        t.check(back.as_ref() == Ok(&w), || format!("round trip {w}: {back:?}"));

        let tight = pull_tight(&c);
        let again = tight.as_ref().map(pull_tight);
        t.check(matches!((&tight, &again), (Ok(a), Ok(Ok(b))) if a == b), || format!("idempotence {w}"));
        let at = rng.gen_range(0..c.waypoints.len());
        let d = detour(&c, at, Q::new(rng.gen_range(-9..=9), 4), Q::new(rng.gen_range(-9..=9) * 2 + 1, 6));
        if d.avoids_lattice() {
            t.check(homotopic(&d, &c).unwrap_or(false), || format!("detour {w} at {at}"));
        }
    }

    let mut pairs = 0;
    while pairs < 50 {
        let gamma = random_c_word(&mut rng);
        let theta = random_word(&mut rng, 8);
        let m = gamma.len() as i64;
        if m.gcd(&theta.horizontal_period()) != 1 {
            continue;
        }
        pairs += 1;
        let a = merge(&gamma, &theta).map(|v| normalized(&v));
        let b = merge_geometric(&gamma, &theta).map(|v| normalized(&v));
        t.check(a.is_ok() && a == b, || format!("merge {gamma} with {theta}: {a:?} vs {b:?}"));
    }

    for (name, k) in corpus::corpus() {
        let flipped = involution(&k);
        t.check(flipped.as_ref().map(|f| f.word_set()).ok() == Some(k.word_set()), || {
            format!("involution {name}")
        });
    }

    for (name, k) in base_corpus() {
        for (p, q) in GRID {
            let params = CableParams::new(p, q).expect("valid");
            let a = cable_merge_with(&k, params).map(|c| c.curve);
            let b = cable_merge_with(&k, params.reframed(1)).map(|c| c.curve);
            t.check(a.is_ok() && a == b, || format!("framing {name} ({p},{q})"));
        }
    }
    t.finish(7, "property suites")
}

/// Pretty JSON with a trailing newline, as written by the CLI.
pub fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize") + "\n"
}

/// Where golden files live.
pub fn golden_dir() -> PathBuf {
    std::env::var_os(GOLDEN_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden"))
}

/// Every artifact under golden control: relative path and contents.
pub fn golden_artifacts() -> Vec<(String, String)> {
    let mut out = Vec::new();
    let svg = |k: &Multicurve, opts: RenderOptions| render_svg(k, &opts).expect("valid render options");
    out.push((
        "svg/unknot-cylinder.svg".into(),
        svg(&crate::cabling::unknot(), RenderOptions::default()),
    ));
    out.push((
        "svg/trefoil-plane.svg".into(),
        svg(&corpus::right_trefoil(), RenderOptions { view: View::Plane, columns: 3, ..Default::default() }),
    ));
    let cable = cable_geometric(&corpus::right_trefoil(), 3, 2).expect("valid").curve;
    out.push((
        "svg/trefoil-3-2-tiling.svg".into(),
        svg(&cable, RenderOptions { view: View::Tiling, cable: Some((3, 2)), ..Default::default() }),
    ));
    for (name, k) in corpus::corpus() {
        out.push((format!("json/{name}.curve.json"), CurveFile::from_multicurve(name, &k).to_json()));
        out.push((format!("json/{name}.invariants.json"), pretty(&report(&k))));
        out.push((format!("json/{name}.check-cable.json"), pretty(&obstruction_report(&k, 5))));
    }
    let grid: BTreeMap<String, String> = GRID
        .iter()
        .map(|&(p, q)| {
            let c = cable_geometric(&corpus::right_trefoil(), p, q).expect("valid").curve;
            (format!("{p},{q}"), c.gamma0_display())
        })
        .collect();
    out.push(("json/trefoil-cables.json".into(), pretty(&grid)));
    out.push(("json/iterated-5.invariants.json".into(), pretty(&report(&iterated_cable(5)))));
    out
}

pub fn write_goldens(dir: &Path) -> std::io::Result<usize> {
    let arts = golden_artifacts();
    for (rel, body) in &arts {
        let path = dir.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(path, body)?;
    }
    Ok(arts.len())
}

pub fn determinism() -> CriterionResult {
    let mut t = Tally::new();
    let dir = golden_dir();
    if std::env::var_os(UPDATE_ENV).is_some() {
        if let Err(e) = write_goldens(&dir) {
            t.check(false, || format!("writing goldens to {}: {e}", dir.display()));
        }
    }
    let first = golden_artifacts();
    let second = golden_artifacts();
    t.check(first == second, || "two runs differ".into());
    for (rel, body) in &first {
        let path = dir.join(rel);
        match fs::read_to_string(&path) {
            Ok(g) => t.check(&g == body, || format!("{rel} differs from golden")),
            Err(e) => t.check(false, || format!("{}: {e}", path.display())),
        }
    }
    t.finish(8, "determinism")
}

pub fn run_all() -> Vec<CriterionResult> {
    vec![
        route_equivalence(),
        tau_epsilon(),
        phi_under_21(),
        lspace(),
        alexander_product(),
        obstruction_soundness(),
        property_suites(),
        determinism(),
    ]
}
