//! Seeded verification suites. Each suite draws its cases from its own random
//! stream; `budget` overrides the number of random cases.
use crate::error::{Error, Result};
use crate::format::{q_text, Space};
use crate::golden::{self, GOLDEN};
use crate::homology::{self, Theory};
use crate::random::{self, SuiteRng};
use crate::report::{Report, SuiteReport};
use mhom_core::algebra::{smith, IntMatrix};
use mhom_core::arith::{q, qi, Q};
use mhom_core::bracket::{bracket, bracket_inverse_deg0};
use mhom_core::cech::{cosheaf_split, eps_preimage, solve_phi, Apex, CechChain, Coefficient, Preference};
use mhom_core::chains::{equal_in_limit, from_simplicial, AffineSimplex, LipschitzChain};
use mhom_core::complex::{mcshane_extension, Affine, BallCover, Formula, PlFunction, PlMap};
use mhom_core::currents::{equicontinuity_bound, PolyhedralCurrent, TestForm};
use mhom_core::geometry::Point;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use serde_json::json;

pub const SUITES: &[&str] = &["stokes", "green", "prism", "cone", "mass", "cosheaf", "degree0", "mcshane", "snf", "golden"];

/// Slack for the floating-point mass comparisons.
const MASS_SLACK: f64 = 1e-9;

pub struct VerifyConfig {
    pub seed: u64,
    pub budget: Option<usize>,
    pub depth: usize,
    /// Space and cover for the cosheaf suite; S¹ with both arc covers otherwise.
    pub space: Option<Space>,
    pub cover: Option<(String, BallCover)>,
}

impl VerifyConfig {
    fn cases(&self, default: usize) -> usize {
        self.budget.unwrap_or(default)
    }
}

pub fn run(name: &str, cfg: &VerifyConfig) -> Result<Report> {
    let names: Vec<&str> = match name {
        "all" => SUITES.to_vec(),
        n if SUITES.contains(&n) => vec![n],
        n => return Err(Error::Usage(format!("unknown suite `{n}`; known: all, {}", SUITES.join(", ")))),
    };
    let mut report = Report::new("verify");
    report.set("suite", name);
    report.set("seed", cfg.seed);
    report.set("budget", cfg.budget);
    report.set("depth", cfg.depth);
    for n in names {
        let suite = match n {
            "stokes" => stokes(cfg),
            "green" => green(cfg)?,
            "prism" => prism(cfg),
            "cone" => cone(cfg),
            "mass" => mass(cfg)?,
            "cosheaf" => cosheaf(cfg)?,
            "degree0" => degree0(cfg)?,
            "mcshane" => mcshane(cfg)?,
            "snf" => snf(cfg),
            "golden" => golden_suite()?,
            _ => unreachable!("suite names are checked above"),
        };
        report.suites.push(suite);
    }
    Ok(report)
}

fn stokes(cfg: &VerifyConfig) -> SuiteReport {
    let mut suite = SuiteReport::new("stokes");
    let mut rng = random::stream(cfg.seed, "stokes");
    for case in 0..cfg.cases(200) {
        let degree = 1 + case % 3;
        let dim = 3 + (case / 3) % 2;
        let count = rng.gen_range(1..=4);
        let c = random::chain(&mut rng, degree, dim, count);
        let t = bracket(&c, dim);
        suite.check("chain-map", case, t.boundary() == bracket(&c.boundary(), dim), || chain_witness(&c));
        suite.check("bb", case, c.boundary().boundary().is_zero(), || chain_witness(&c));
        suite.check("dd", case, t.boundary().boundary().is_zero(), || chain_witness(&c));
    }
    // simplicial chains of the golden spaces
    let mut case = 0;
    for name in golden::space_names() {
        let space = golden::builtin_space(name).expect("built-in space");
        let x = &space.complex;
        for k in 1..=x.dim() {
            let coeffs: Vec<BigInt> = (0..x.faces(k).len()).map(|_| BigInt::from(rng.gen_range(-2..=2))).collect();
            let c = from_simplicial(x, k, &coeffs);
            let n = x.ambient_dim();
            suite.check("golden-chain-map", case, bracket(&c, n).boundary() == bracket(&c.boundary(), n), || {
                json!({"space": name, "degree": k})
            });
            case += 1;
        }
    }
    suite
}

fn chain_witness(c: &LipschitzChain) -> serde_json::Value {
    serde_json::to_value(crate::format::chain_to_file(c)).expect("chain serializes")
}

fn current_witness(t: &PolyhedralCurrent) -> serde_json::Value {
    serde_json::to_value(crate::format::current_to_file(t)).expect("current serializes")
}

fn random_affine(rng: &mut SuiteRng, dim: usize) -> Affine {
    Affine::new((0..dim).map(|_| random::rational(rng, -2, 2, 3)).collect(), random::rational(rng, -2, 2, 3))
}

fn green(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("green");
    let xy = |x: i64, y: i64| vec![qi(x), qi(y)];
    let square = PolyhedralCurrent::from_pieces(
        2,
        2,
        [(1, vec![xy(0, 0), xy(1, 0), xy(1, 1)]), (1, vec![xy(0, 0), xy(1, 1), xy(0, 1)])],
    );
    let y_dx = TestForm::new(PlFunction::coordinate(1, 2), vec![PlFunction::coordinate(0, 2)]);
    let value = square.boundary().evaluate(&y_dx)?;
    suite.check("unit-square", 0, value == qi(-1), || json!(q_text(&value)));
    let flat = TestForm::new(PlFunction::coordinate(1, 2), vec![PlFunction::constant(qi(3), 2)]);
    let value = square.boundary().evaluate(&flat)?;
    suite.check("locality", 0, value.is_zero(), || json!(q_text(&value)));
    let mut rng = random::stream(cfg.seed, "green");
    for case in 0..cfg.cases(50) {
        let degree = 1 + case % 2;
        let dim = 2 + case % 2;
        let count = rng.gen_range(1..=3);
        let t = random::current(&mut rng, degree, dim, count);
        let f = PlFunction::Affine(random_affine(&mut rng, dim));
        let pi: Vec<PlFunction> = (0..degree - 1).map(|_| PlFunction::Affine(random_affine(&mut rng, dim))).collect();
        let form = TestForm::new(f.clone(), pi.clone());
        let lhs = t.boundary().evaluate(&form)?;
        let rhs = t.evaluate(&form.exterior(dim))?;
        suite.check("stokes-form", case, lhs == rhs, || json!({"current": current_witness(&t), "lhs": q_text(&lhs), "rhs": q_text(&rhs)}));
        let mut frozen = vec![PlFunction::Affine(random_affine(&mut rng, dim)); degree];
        frozen[rng.gen_range(0..degree)] = PlFunction::constant(random::rational(&mut rng, -2, 2, 3), dim);
        let value = t.evaluate(&TestForm::new(f, frozen))?;
        suite.check("locality", case, value.is_zero(), || json!({"current": current_witness(&t), "value": q_text(&value)}));
    }
    Ok(suite)
}

fn prism(cfg: &VerifyConfig) -> SuiteReport {
    let mut suite = SuiteReport::new("prism");
    let mut rng = random::stream(cfg.seed, "prism");
    for case in 0..cfg.cases(50) {
        let degree = case % 3;
        // coplanar overlapping pieces make the exact reduction expensive, so
        // top-degree currents are kept out of the plane
        let dim = (degree + 1).max(2) + (case / 3) % 2;
        let count = rng.gen_range(1..=3);
        let t = random::current(&mut rng, degree, dim, count);
        let mut expected = t.slice_at(&qi(1)).sub(&t.slice_at(&qi(0)));
        if degree > 0 {
            expected = expected.sub(&t.boundary().product_interval());
        }
        let ok = t.product_interval().boundary() == expected;
        suite.check("product-boundary", case, ok, || current_witness(&t));
    }
    suite
}

/// A cycle: the boundary of a random current, or a balanced point current.
fn random_cycle(rng: &mut SuiteRng, degree: usize, dim: usize) -> PolyhedralCurrent {
    if degree == 0 {
        let p = random::point(rng, dim, -2, 2);
        let r = random::point(rng, dim, -2, 2);
        let a = random::coefficient(rng);
        return PolyhedralCurrent::point(p).sub(&PolyhedralCurrent::point(r)).scale(a);
    }
    let count = rng.gen_range(1..=2);
    random::current(rng, degree + 1, dim, count).boundary()
}

fn cone(cfg: &VerifyConfig) -> SuiteReport {
    let mut suite = SuiteReport::new("cone");
    let mut rng = random::stream(cfg.seed, "cone");
    for case in 0..cfg.cases(50) {
        let degree = case % 3;
        let dim = degree + 2;
        let t = random_cycle(&mut rng, degree, dim);
        let apex = random::point(&mut rng, dim, -3, 3);
        let s = t.cone_to(&apex);
        suite.check("boundary", case, s.boundary() == t.neg(), || json!({"cycle": current_witness(&t)}));
        let ok = s.diameter2_with(&[]) <= t.diameter2_with(std::slice::from_ref(&apex));
        suite.check("diameter", case, ok, || json!({"cycle": current_witness(&t)}));
    }
    suite
}

/// A PL map R^dim → R^dim whose components are affine or maxima of two
/// affine functions.
fn random_map(rng: &mut SuiteRng, dim: usize) -> PlMap {
    PlMap {
        components: (0..dim)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    PlFunction::Affine(random_affine(rng, dim))
                } else {
                    PlFunction::Max(vec![random_affine(rng, dim), random_affine(rng, dim)])
                }
            })
            .collect(),
    }
}

fn mass(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("mass");
    let mut rng = random::stream(cfg.seed, "mass");
    for case in 0..cfg.cases(100) {
        let degree = case % 3;
        let dim = 2 + case % 2;
        let count = rng.gen_range(1..=3);
        let t = random::current(&mut rng, degree, dim, count);
        let phi = random_map(&mut rng, dim);
        let image = t.pushforward(&phi)?;
        let lip = phi.lipschitz_on(&t.support())?;
        let bound = lip.powi(degree as i32) * t.mass() + MASS_SLACK;
        suite.check("pushforward", case, image.mass() <= bound, || {
            json!({"current": current_witness(&t), "mass": image.mass(), "bound": bound})
        });
        let count = rng.gen_range(1..=3);
        let s = random::current(&mut rng, degree, dim, count);
        let sum = s.add(&t).mass();
        suite.check("subadditive", case, sum <= s.mass() + t.mass() + MASS_SLACK, || json!({"sum": sum}));
        // unit-Lipschitz f (gradient entries at most 1/2 in dimension ≤ 3 keep the norm below 1)
        let k = 1 + case % 2;
        let count = rng.gen_range(1..=3);
        let u = random::current(&mut rng, k, dim, count);
        let grad: Vec<Q> = (0..dim).map(|_| random::rational(&mut rng, 0, 1, 4) - q(1, 2)).collect();
        let lip_f = grad.iter().map(|g| mhom_core::arith::q_to_f64(&(g * g))).sum::<f64>().sqrt();
        let f = PlFunction::Affine(Affine::new(grad, random::rational(&mut rng, -1, 1, 3)));
        let pi: Vec<PlFunction> = (0..k).map(|_| PlFunction::Affine(random_affine(&mut rng, dim))).collect();
        let pi2: Vec<PlFunction> = (0..k).map(|_| PlFunction::Affine(random_affine(&mut rng, dim))).collect();
        let (left, right) = equicontinuity_bound(&u, &f, &pi, &pi2, lip_f)?;
        suite.check("equicontinuity", case, left <= right + MASS_SLACK, || {
            json!({"current": current_witness(&u), "left": left, "right": right})
        });
    }
    Ok(suite)
}

/// Extra subdivision levels when comparing chains.
const EXTRA_DEPTH: usize = 2;

/// Subdivision budget for ε-preimages in the cosheaf suite.
const ASSIGN_BUDGET: usize = 8;

/// Random degree-q simplices inside random faces of the space.
fn simplices_on(rng: &mut SuiteRng, space: &Space, degree: usize, count: usize) -> Vec<(i64, Vec<Point>)> {
    let x = &space.complex;
    let faces: Vec<&Vec<usize>> = (degree..=x.dim()).flat_map(|d| x.faces(d)).collect();
    (0..count)
        .map(|_| {
            let pts = x.points(faces[rng.gen_range(0..faces.len())]);
            loop {
                let s: Vec<Point> = (0..=degree).map(|_| random::point_in(rng, &pts, true)).collect();
                if degree == 0 || mhom_core::geometry::is_nondegenerate(&s) {
                    return (random::coefficient(rng), s);
                }
            }
        })
        .collect()
}

fn covers_for(cfg: &VerifyConfig) -> Result<(Space, Vec<(String, BallCover)>)> {
    let space = match &cfg.space {
        Some(s) => s.clone(),
        None => golden::builtin_space("s1").expect("built-in space"),
    };
    let covers = match &cfg.cover {
        Some(c) => vec![c.clone()],
        None if cfg.space.is_none() => ["arcs2", "arcs3"]
            .iter()
            .map(|n| (n.to_string(), golden::builtin_cover(&space, n).expect("built-in cover")))
            .collect(),
        None => match golden::default_cover(&space) {
            Some(c) => vec![("default".into(), c)],
            None => return Err(Error::Usage(format!("space {} has no built-in cover; pass --cover", space.name))),
        },
    };
    Ok((space, covers))
}

/// ε-surjectivity and ker ε ⊆ im Φ₁ (and ker Φ₁ ⊆ im Φ₂) for one element.
fn exactness_checks<A: Coefficient>(
    suite: &mut SuiteReport,
    tag: &str,
    case: usize,
    x: &A,
    n: usize,
    cover: &BallCover,
    augments_to: impl Fn(&A) -> bool,
) -> Result<()> {
    let first = eps_preimage(x, n, cover, Preference::First, ASSIGN_BUDGET)?;
    let last = eps_preimage(x, n, cover, Preference::Last, ASSIGN_BUDGET)?;
    let ok = first.validate(cover).is_ok() && augments_to(&first.augment()?);
    suite.check(&format!("{tag}-eps-surjective"), case, ok, || json!({"case": case}));
    let kernel = first.sub(&last);
    let lo = solve_phi(&kernel, cover, Apex::Min)?;
    let ok = lo.validate(cover).is_ok() && lo.phi().same(&kernel);
    suite.check(&format!("{tag}-kernel-eps"), case, ok, || json!({"components": kernel.len()}));
    let hi = solve_phi(&kernel, cover, Apex::Max)?;
    let cycle = lo.sub(&hi);
    let up = solve_phi(&cycle, cover, Apex::Min)?;
    suite.check(&format!("{tag}-kernel-phi"), case, up.phi().same(&cycle), || json!({"components": cycle.len()}));
    Ok(())
}

fn random_cech(rng: &mut SuiteRng, degree: usize, balls: usize, dim: usize) -> CechChain<LipschitzChain> {
    let mut x = CechChain::zero(degree, 1, dim);
    for _ in 0..rng.gen_range(1..=4) {
        let mut tuple: Vec<usize> = (0..balls).collect();
        while tuple.len() > degree + 1 {
            tuple.remove(rng.gen_range(0..tuple.len()));
        }
        let terms = rng.gen_range(1..=2);
        x.add_at(&tuple, &random::chain(rng, 1, dim, terms));
    }
    x
}

fn cosheaf(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("cosheaf");
    let (space, covers) = covers_for(cfg)?;
    suite.detail("space", &space.name);
    suite.detail("covers", covers.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>());
    let n = space.complex.ambient_dim();
    for (name, cover) in &covers {
        let mut rng = random::stream(cfg.seed, &format!("cosheaf-{name}"));
        for case in 0..cfg.cases(50) {
            let degree = if case % 5 == 4 { 0 } else { 1 };
            let count = rng.gen_range(1..=3);
            let raw = simplices_on(&mut rng, &space, degree, count);
            let t = PolyhedralCurrent::from_pieces(degree, n, raw.clone());
            let c = LipschitzChain::from_terms(degree, raw.into_iter().map(|(a, v)| (a, AffineSimplex::new(v))));
            let tag = format!("{name}-current");
            if let Err(e) = exactness_checks(&mut suite, &tag, case, &t, n, cover, |a| *a == t) {
                suite.error(&tag, case, e);
            }
            let tag = format!("{name}-chain");
            if let Err(e) = exactness_checks(&mut suite, &tag, case, &c, n, cover, |a| equal_in_limit(a, &c, EXTRA_DEPTH)) {
                suite.error(&tag, case, e);
            }
            if cover.len() == 2 {
                let (u, v) = (&cover.balls[0], &cover.balls[1]);
                match cosheaf_split(&t, &space.complex, u, v, cfg.depth.min(3)) {
                    Ok((s, s2)) => {
                        let inside = |c: &PolyhedralCurrent, b: &mhom_core::complex::Ball| {
                            c.pieces().iter().all(|p| p.vertices.iter().all(|y| b.contains(y)))
                        };
                        let ok = s.add(&s2) == t && inside(&s, u) && inside(&s2, v);
                        suite.check(&format!("{name}-split"), case, ok, || current_witness(&t));
                    }
                    Err(e) => suite.error(&format!("{name}-split"), case, e),
                }
            }
        }
        // the double complex itself, on chains of random coefficients
        for case in 0..cfg.cases(50) {
            let balls = cover.len().max(3);
            let x = random_cech(&mut rng, 2.min(balls - 1), balls, n);
            let lam: Vec<usize> = (0..balls).map(|_| rng.gen_range(0..balls)).collect();
            suite.check("phi-phi", case, x.phi().phi().is_zero(), || json!({"case": case}));
            let ok = x.phi().vertical().same(&x.vertical().phi())
                && x.push(&lam).phi().same(&x.phi().push(&lam))
                && x.phi().bracket().same(&x.bracket().phi())
                && x.vertical().bracket().same(&x.bracket().vertical());
            suite.check("squares-commute", case, ok, || json!({"case": case}));
            let y = random_cech(&mut rng, 1, balls, n);
            suite.check("eps-phi", case, y.phi().augment()?.is_zero(), || json!({"case": case}));
        }
    }
    Ok(suite)
}

fn degree0(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("degree0");
    let mut rng = random::stream(cfg.seed, "degree0");
    for case in 0..cfg.cases(100) {
        let dim = 1 + case % 3;
        let points = rng.gen_range(1..=5);
        let t = random::point_current(&mut rng, dim, points);
        let c = bracket_inverse_deg0(&t)?;
        suite.check("current-round-trip", case, bracket(&c, dim) == t, || current_witness(&t));
        suite.check("augmentation", case, c.coefficient_sum() == t.augmentation(), || current_witness(&t));
        let count = rng.gen_range(1..=5);
        let d = random::chain(&mut rng, 0, dim, count);
        let back = bracket_inverse_deg0(&bracket(&d, dim))?;
        suite.check("chain-round-trip", case, Coefficient::same(&back, &d.canonical()), || chain_witness(&d));
    }
    Ok(suite)
}

fn mcshane(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("mcshane");
    let mut rng = random::stream(cfg.seed, "mcshane");
    let spaces: Vec<Space> = ["disc", "s1", "annulus"].iter().map(|n| golden::builtin_space(n).expect("built-in")).collect();
    let meshes: Vec<_> = spaces.iter().map(|s| s.complex.subdivide(1)).collect();
    for case in 0..cfg.cases(50) {
        let which = case % spaces.len();
        let (x, mesh) = (&spaces[which].complex, &meshes[which]);
        let lipschitz = [q(1, 2), qi(1), qi(2)][rng.gen_range(0..3)].clone();
        let axis = rng.gen_range(0..x.ambient_dim());
        let slope = &lipschitz * random::rational(&mut rng, -1, 1, 4);
        let offset = random::rational(&mut rng, -1, 1, 3);
        let mut samples: Vec<(Point, Q)> = Vec::new();
        for _ in 0..rng.gen_range(1..=5) {
            let p = mesh.vertices()[rng.gen_range(0..mesh.vertices().len())].clone();
            if samples.iter().all(|(s, _)| *s != p) {
                let v = &slope * &p[axis] + &offset;
                samples.push((p, v));
            }
        }
        let formula = if case % 2 == 0 { Formula::Inf } else { Formula::Sup };
        let ext = mcshane_extension(x, &samples, &lipschitz, 1, formula)?;
        let witness = || json!({"space": spaces[which].name, "samples": samples.len(), "lipschitz": q_text(&lipschitz)});
        suite.check("lipschitz", case, ext.check_lipschitz().is_ok(), witness);
        suite.check("boundary-data", case, ext.matches_samples(), witness);
    }
    Ok(suite)
}

fn snf(cfg: &VerifyConfig) -> SuiteReport {
    let mut suite = SuiteReport::new("snf");
    let mut rng = random::stream(cfg.seed, "snf");
    for case in 0..cfg.cases(50) {
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-4..=4)).collect()).collect();
        let m = IntMatrix::from_rows(&rows);
        let s = smith(&m);
        let witness = || json!({"matrix": rows});
        suite.check("decomposition", case, s.u.mul(&m).mul(&s.v) == s.d, witness);
        let diagonal = (0..r).all(|i| {
            (0..c).all(|j| {
                let x = s.d.get(i, j);
                if i != j {
                    x == BigInt::from(0)
                } else {
                    s.divisors.get(i).map_or(x == BigInt::from(0), |d| x == *d)
                }
            })
        });
        suite.check("diagonal", case, diagonal, witness);
        let divides = s.divisors.windows(2).all(|w| (&w[1] % &w[0]) == BigInt::from(0));
        suite.check("divisibility", case, divides, witness);
        let unimodular = s.u.mul(&s.u_inv) == IntMatrix::identity(r) && s.v.mul(&s.v_inv) == IntMatrix::identity(c);
        suite.check("unimodular", case, unimodular, witness);
    }
    suite
}

fn golden_suite() -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("golden");
    for (case, g) in GOLDEN.iter().enumerate() {
        let space = golden::builtin_space(g.space).expect("built-in space");
        let singular = homology::run(&space, g.pair, Theory::Singular)?;
        let groups: Vec<String> = serde_json::from_value(singular.result["groups"].clone()).expect("group list");
        let matches = groups.len() == g.expected.len()
            && groups.iter().zip(g.expected).all(|(got, want)| want.is_none_or(|w| w == got));
        suite.check("groups", case, matches, || json!({"space": g.space, "pair": g.pair, "groups": groups}));
        let lipschitz = homology::run(&space, g.pair, Theory::Lipschitz)?;
        let same = lipschitz.result["groups"] == singular.result["groups"] && lipschitz.passed();
        suite.check("lipschitz-identical", case, same, || json!({"space": g.space, "report": lipschitz.result}));
        let current = homology::run(&space, g.pair, Theory::Current)?;
        suite.check("current-generators", case, current.passed(), || json!({"space": g.space}));
    }
    Ok(suite)
}
