//! Example groups with build-time self-checks.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cayley::{Generator, GeneratorSet};
use crate::circle::{Element, LiftedMap, ProjectiveMap};
use crate::error::{Error, Result};
use crate::discreteness::{discreteness_profile, Interval, Verdict};

/// Tolerance of the relator oracles.
pub const RELATOR_TOL: f64 = 1e-8;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expanding: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discrete: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
}

/// A finitely generated group of circle maps: a symmetric generating set,
/// optional relators (words over generator names) and expected verdicts.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupSpec {
    pub name: String,
    pub k: u32,
    gens: GeneratorSet,
    pub relators: Vec<String>,
    pub expected: Expected,
}

impl GroupSpec {
    pub fn new(name: &str, gens: Vec<Generator>, relators: Vec<String>, expected: Expected) -> Result<Self> {
        let gens = GeneratorSet::new(gens)?;
        let spec = GroupSpec {
            name: name.to_string(),
            k: gens.k(),
            gens,
            relators,
            expected,
        };
        spec.check_relators(RELATOR_TOL)?;
        Ok(spec)
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    /// Indices of generators that are not the inverse of an earlier one.
    pub fn primary_indices(&self) -> Vec<usize> {
        (0..self.gens.len())
            .filter(|&i| self.gens.inverse_index(i) >= i)
            .collect()
    }

    /// Every relator evaluates to the identity (with trivial deck part).
    pub fn check_relators(&self, tol: f64) -> Result<()> {
        for r in &self.relators {
            let w = self.gens.parse_word(r)?;
            let g = self.gens.evaluate(&w);
            if !g.is_identity(tol) {
                return Err(Error::OracleFailed(format!(
                    "relator {r} of {} evaluates to {} (branch {})",
                    self.name,
                    g.base(),
                    g.branch()
                )));
            }
        }
        Ok(())
    }
}

/// `SU(1,1)` matrix `[[a, b], [b̄, ā]]` acting on the unit disk.
#[derive(Clone, Copy, Debug)]
struct Disk {
    a: Complex64,
    b: Complex64,
}

impl Disk {
    fn rotation(theta: f64) -> Disk {
        Disk {
            a: Complex64::from_polar(1.0, theta / 2.0),
            b: Complex64::new(0.0, 0.0),
        }
    }

    /// Hyperbolic translation along the real diameter by distance `t`.
    fn translation(t: f64) -> Disk {
        Disk {
            a: Complex64::new((t / 2.0).cosh(), 0.0),
            b: Complex64::new((t / 2.0).sinh(), 0.0),
        }
    }

    /// The map `w ↦ (w + z0) / (z̄0 w + 1)` sending `0` to `z0`.
    fn moving_origin_to(z0: Complex64) -> Disk {
        let s = 1.0 / (1.0 - z0.norm_sqr()).sqrt();
        Disk {
            a: Complex64::new(s, 0.0),
            b: z0 * s,
        }
    }

    fn mul(&self, o: &Disk) -> Disk {
        Disk {
            a: self.a * o.a + self.b * o.b.conj(),
            b: self.a * o.b + self.b * o.a.conj(),
        }
    }

    fn inv(&self) -> Disk {
        Disk {
            a: self.a.conj(),
            b: -self.b,
        }
    }

    fn to_map(self) -> Result<ProjectiveMap> {
        ProjectiveMap::from_disk(self.a, self.b)
    }
}

fn base_gen(name: &str, m: ProjectiveMap) -> Generator {
    Generator {
        name: name.to_string(),
        element: LiftedMap::base_map(m),
    }
}

/// Rotations `a`, `b` by `2π/p`, `2π/q` about two vertices of the hyperbolic
/// triangle with angles `π/p, π/q, π/r`, so that `ab` rotates by `2π/r`
/// about the third. The picture is conjugated so that an interior point of
/// the triangle sits at the center of the disk.
pub fn triangle_group(p: u32, q: u32, r: u32) -> Result<GroupSpec> {
    if p < 2 || q < 2 || r < 2 {
        return Err(Error::NotHyperbolic(p, q, r));
    }
    let (pp, qq, rr) = (u64::from(p), u64::from(q), u64::from(r));
    if qq * rr + pp * rr + pp * qq >= pp * qq * rr {
        return Err(Error::NotHyperbolic(p, q, r));
    }
    let (al, be, ga) = (PI / f64::from(p), PI / f64::from(q), PI / f64::from(r));
    let side_pq = ((al.cos() * be.cos() + ga.cos()) / (al.sin() * be.sin())).acosh();
    let side_pr = ((al.cos() * ga.cos() + be.cos()) / (al.sin() * ga.sin())).acosh();
    let vq = Complex64::new((side_pq / 2.0).tanh(), 0.0);
    let vr = Complex64::from_polar((side_pr / 2.0).tanh(), al);

    let a = Disk::rotation(2.0 * al);
    let tq = Disk::moving_origin_to(vq);
    let center = (vq + vr) / 3.0;
    let tc = Disk::moving_origin_to(center);
    let conj = |g: &Disk| tc.inv().mul(g).mul(&tc);

    let name = format!("triangle({p},{q},{r})");
    let relators = vec![
        "a".repeat(p as usize),
        "b".repeat(q as usize),
        "ab".repeat(r as usize),
    ];
    let mut last = None;
    for sign in [1.0, -1.0] {
        let b = tq.mul(&Disk::rotation(sign * 2.0 * be)).mul(&tq.inv());
        let gens = vec![
            base_gen("a", conj(&a).to_map()?),
            base_gen("b", conj(&b).to_map()?),
        ];
        let expected = Expected {
            expanding: Some(true),
            discrete: Some(true),
            degree: Some(1),
        };
        match GroupSpec::new(&name, gens, relators.clone(), expected) {
            Ok(spec) => return Ok(spec),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("two orientations tried"))
}

/// Genus-2 surface group: side pairings of the regular octagon with vertex
/// angle `π/4` centered at the origin, sides `i → i + 2` for
/// `i ∈ {0, 1, 4, 5}`. The relator is found by searching words that use each
/// generator and inverse once.
pub fn surface_group(genus: u32) -> Result<GroupSpec> {
    if genus != 2 {
        return Err(Error::UnsupportedGenus(genus));
    }
    // cosh(inradius) = cot(π/8) for the octagon with angles π/4
    let inradius = (1.0 / (PI / 8.0).tan()).acosh();
    let tau = Disk::translation(2.0 * inradius);
    let theta = |j: usize| j as f64 * PI / 4.0;
    let pairing = |i: usize, j: usize| {
        Disk::rotation(theta(j))
            .mul(&tau)
            .mul(&Disk::rotation(PI - theta(i)))
    };
    let names = ["a", "b", "c", "d"];
    let sides = [0usize, 1, 4, 5];
    let mut gens = Vec::new();
    for (name, &i) in names.iter().zip(&sides) {
        gens.push(base_gen(name, pairing(i, i + 2).to_map()?));
    }
    let set = GeneratorSet::new(gens.clone())?;
    let relator = find_surface_relator(&set)?;
    let expected = Expected {
        expanding: Some(true),
        discrete: Some(true),
        degree: Some(1),
    };
    let spec = GroupSpec::new("surface(2)", gens, vec![relator], expected)?;
    let profile = discreteness_profile(
        spec.generators(),
        &[2, 3, 4],
        Interval::new(0.2, 0.45)?,
        (-10.0, 10.0),
    )?;
    if profile.verdict != Verdict::LocallyDiscrete {
        return Err(Error::OracleFailed(format!(
            "octagon group probe verdict {}",
            profile.verdict
        )));
    }
    Ok(spec)
}

/// First word (in a fixed enumeration) using each of the eight letters
/// exactly once that evaluates to the identity.
fn find_surface_relator(set: &GeneratorSet) -> Result<String> {
    let letters: Vec<usize> = (0..set.len()).collect();
    let mut perm = letters.clone();
    let mut found = None;
    // first letter fixed: relators are defined up to cyclic rotation
    permute(&mut perm, 1, &mut |w| {
        if found.is_none() && set.evaluate(w).is_identity(RELATOR_TOL) {
            found = Some(set.word_string(w));
        }
    });
    found.ok_or_else(|| Error::OracleFailed("no octagon relator found".into()))
}

fn permute<F: FnMut(&[usize])>(v: &mut Vec<usize>, start: usize, f: &mut F) {
    if start == v.len() {
        f(v);
        return;
    }
    for i in start..v.len() {
        v.swap(start, i);
        permute(v, start + 1, f);
        v.swap(start, i);
    }
}

/// Lift every generator to the `k`-fold cover, choosing branches so that
/// each relator lifts to the identity. The search is exhaustive over
/// `k^n` assignments, `n` the number of generators up to inversion.
pub fn lift_group(spec: &GroupSpec, k: u32) -> Result<GroupSpec> {
    if k == 0 {
        return Err(Error::InvalidArgument("cover degree must be positive".into()));
    }
    if spec.k != 1 {
        return Err(Error::InvalidArgument("only base groups can be lifted".into()));
    }
    if k == 1 {
        return Ok(spec.clone());
    }
    let primary = spec.primary_indices();
    let n = primary.len() as u32;
    let total = u64::from(k).pow(n);
    for code in 0..total {
        let mut c = code;
        let mut gens = Vec::with_capacity(primary.len());
        for &i in &primary {
            let branch = (c % u64::from(k)) as u32;
            c /= u64::from(k);
            let g = &spec.generators().generators()[i];
            gens.push(Generator {
                name: g.name.clone(),
                element: LiftedMap::new(*g.element.base(), k, branch)?,
            });
        }
        let mut expected = spec.expected.clone();
        expected.degree = spec.expected.degree.map(|d| d * k);
        let name = format!("{}^{k}", spec.name);
        if let Ok(lifted) = GroupSpec::new(&name, gens, spec.relators.clone(), expected) {
            return Ok(lifted);
        }
    }
    Err(Error::NoConsistentLift(k))
}

/// `PSL₂(Z)` generated by `s = (0,-1;1,0)` and `t = (1,1;0,1)`.
pub fn modular_group() -> Result<GroupSpec> {
    let s = ProjectiveMap::normalize([0.0, -1.0, 1.0, 0.0])?;
    let t = ProjectiveMap::normalize([1.0, 1.0, 0.0, 1.0])?;
    GroupSpec::new(
        "modular",
        vec![base_gen("s", s), base_gen("t", t)],
        vec!["ss".into(), "ststst".into()],
        Expected {
            expanding: Some(false),
            discrete: Some(true),
            degree: None,
        },
    )
}

/// Ping-pong arc on the circle: center and half-width in the angular chart.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub center: f64,
    pub half_width: f64,
}

impl Arc {
    fn contains(&self, x: f64, tol: f64) -> bool {
        crate::circle::circle_dist(x, self.center) <= self.half_width + tol
    }
}

/// Two hyperbolic translations along perpendicular diameters. `separation`
/// is the angular gap (radians of the disk boundary) between neighboring
/// ping-pong arcs; the translation length is chosen so that each generator
/// maps the complement of its repelling arc exactly onto its attracting arc.
pub fn schottky_group(separation: f64) -> Result<GroupSpec> {
    if !(separation > 0.0 && separation < PI / 2.0) {
        return Err(Error::PingPongFails(format!(
            "separation {separation} must lie in (0, π/2)"
        )));
    }
    let half = (PI / 2.0 - separation) / 2.0;
    let length = 2.0 * half.cos().atanh();
    let a = Disk::translation(length);
    let quarter = Disk::rotation(PI / 2.0);
    let b = quarter.mul(&a).mul(&quarter.inv());
    let spec = GroupSpec::new(
        &format!("schottky({separation})"),
        vec![base_gen("a", a.to_map()?), base_gen("b", b.to_map()?)],
        Vec::new(),
        Expected {
            // gap points lie outside every isometric circle
            expanding: Some(false),
            discrete: Some(true),
            degree: None,
        },
    )?;
    let w = half / (2.0 * PI);
    // attracting / repelling arcs of a, A, b, B in the angular chart
    let arcs = [
        (0, Arc { center: 0.0, half_width: w }, Arc { center: 0.5, half_width: w }),
        (1, Arc { center: 0.5, half_width: w }, Arc { center: 0.0, half_width: w }),
        (2, Arc { center: 0.25, half_width: w }, Arc { center: 0.75, half_width: w }),
        (3, Arc { center: 0.75, half_width: w }, Arc { center: 0.25, half_width: w }),
    ];
    ping_pong_check(spec.generators(), &arcs)?;
    Ok(spec)
}

/// Arcs pairwise disjoint, and each generator maps the closed complement of
/// its repelling arc into its attracting arc.
pub fn ping_pong_check(gens: &GeneratorSet, arcs: &[(usize, Arc, Arc)]) -> Result<()> {
    let centers: Vec<Arc> = arcs.iter().map(|a| a.1).collect();
    for (i, p) in centers.iter().enumerate() {
        for q in &centers[i + 1..] {
            let gap = crate::circle::circle_dist(p.center, q.center) - p.half_width - q.half_width;
            if gap <= 1e-12 {
                return Err(Error::PingPongFails(format!(
                    "arcs around {} and {} overlap",
                    p.center, q.center
                )));
            }
        }
    }
    for (g, attract, repel) in arcs {
        let n = 256;
        for t in 0..=n {
            let x = repel.center + repel.half_width + (1.0 - 2.0 * repel.half_width) * t as f64 / n as f64;
            let y = gens.element(*g).apply(crate::circle::wrap(x));
            if !attract.contains(y, 1e-9) {
                return Err(Error::PingPongFails(format!(
                    "{} maps {x} to {y}, outside its attracting arc",
                    gens.name(*g)
                )));
            }
        }
    }
    Ok(())
}

/// `⟨diag(2, 1/2), unipotent(1)⟩`: solvable, hence not locally discrete.
pub fn affine_nondiscrete() -> Result<GroupSpec> {
    GroupSpec::new(
        "affine",
        vec![
            base_gen("f", ProjectiveMap::diag(2.0)?),
            base_gen("g", ProjectiveMap::unipotent(1.0)),
        ],
        Vec::new(),
        Expected {
            // the generators alone do not expand, products of two do
            expanding: None,
            discrete: Some(false),
            degree: None,
        },
    )
}

/// Cyclic group of the rigid rotation `x ↦ x + alpha`.
pub fn rotation_group(alpha: f64) -> Result<GroupSpec> {
    GroupSpec::new(
        &format!("rotation({alpha})"),
        vec![base_gen("r", ProjectiveMap::rotation(alpha))],
        Vec::new(),
        Expected {
            expanding: Some(false),
            discrete: None,
            degree: None,
        },
    )
}

/// Cyclic group of one map, for toy experiments.
pub fn cyclic_group(name: &str, g: Element) -> Result<GroupSpec> {
    GroupSpec::new(
        name,
        vec![Generator {
            name: "a".into(),
            element: g,
        }],
        Vec::new(),
        Expected::default(),
    )
}

/// Names accepted by [`from_ref`], for listings.
pub const ZOO_REFS: &[(&str, &str)] = &[
    ("triangle:P,Q,R", "rotation generators of the (P,Q,R) triangle group"),
    ("surface:2", "genus-2 octagon side pairings"),
    ("lift:K:REF", "lift of a base group to the K-fold cover"),
    ("modular", "PSL2(Z) with s = (0,-1;1,0), t = (1,1;0,1)"),
    ("schottky[:SEP]", "free Schottky pair, arc gap SEP radians (default 0.5)"),
    ("affine", "diag(2,1/2) and unipotent(1)"),
    ("rotation:ALPHA", "rigid rotation by ALPHA"),
];

/// Build a zoo group from a reference such as `triangle:2,3,7` or
/// `lift:2:surface:2`.
pub fn from_ref(r: &str) -> Result<GroupSpec> {
    let bad = |msg: &str| Error::ParseError {
        location: format!("zoo:{r}"),
        message: msg.to_string(),
    };
    let (head, rest) = r.split_once(':').unwrap_or((r, ""));
    match head {
        "triangle" => {
            let v: Vec<u32> = rest
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| bad("expected P,Q,R")))
                .collect::<Result<_>>()?;
            if v.len() != 3 {
                return Err(bad("expected three integers"));
            }
            triangle_group(v[0], v[1], v[2])
        }
        "surface" => surface_group(rest.parse().map_err(|_| bad("expected a genus"))?),
        "lift" => {
            let (k, inner) = rest.split_once(':').ok_or_else(|| bad("expected lift:K:REF"))?;
            let k: u32 = k.parse().map_err(|_| bad("expected a cover degree"))?;
            lift_group(&from_ref(inner)?, k)
        }
        "modular" => modular_group(),
        "schottky" => {
            let sep = if rest.is_empty() {
                0.5
            } else {
                rest.parse().map_err(|_| bad("expected a separation"))?
            };
            schottky_group(sep)
        }
        "affine" => affine_nondiscrete(),
        "rotation" => rotation_group(rest.parse().map_err(|_| bad("expected an angle"))?),
        _ => Err(bad("unknown zoo group")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_relations_hold() {
        let spec = triangle_group(2, 3, 7).unwrap();
        let s = spec.generators();
        assert_eq!(s.len(), 3); // a is an involution
        for (w, order) in [("a", 2), ("b", 3), ("ab", 7)] {
            let g = s.evaluate(&s.parse_word(w).unwrap());
            let mut acc = Element::identity(1);
            for m in 1..=order {
                acc = acc.compose(&g).unwrap();
                assert_eq!(acc.is_identity(1e-8), m == order, "{w}^{m}");
            }
        }
    }

    /// Exact BFS over integer matrices modulo sign.
    fn psl2z_sphere_sizes(radius: usize) -> Vec<usize> {
        use std::collections::HashSet;
        type M = [i64; 4];
        let mul = |p: M, q: M| -> M {
            [
                p[0] * q[0] + p[1] * q[2],
                p[0] * q[1] + p[1] * q[3],
                p[2] * q[0] + p[3] * q[2],
                p[2] * q[1] + p[3] * q[3],
            ]
        };
        let canon = |m: M| -> M {
            let first = m.iter().copied().find(|&v| v != 0).unwrap();
            if first < 0 { m.map(|v| -v) } else { m }
        };
        let gens: [M; 3] = [[0, -1, 1, 0], [1, 1, 0, 1], [1, -1, 0, 1]];
        let mut seen = HashSet::from([[1, 0, 0, 1]]);
        let mut frontier = vec![[1i64, 0, 0, 1]];
        let mut sizes = vec![1];
        for _ in 0..radius {
            let mut next = Vec::new();
            for &g in &frontier {
                for &s in &gens {
                    let h = canon(mul(s, g));
                    if seen.insert(h) {
                        next.push(h);
                    }
                }
            }
            sizes.push(next.len());
            frontier = next;
        }
        sizes
    }

    #[test]
    fn modular_ball_matches_integer_enumeration() {
        let spec = modular_group().unwrap();
        let ball = crate::cayley::CayleyBall::build(spec.generators(), 6).unwrap();
        assert_eq!(ball.sphere_sizes(), psl2z_sphere_sizes(6));
    }

    #[test]
    fn euclidean_triangle_is_rejected() {
        assert_eq!(triangle_group(2, 3, 6).unwrap_err(), Error::NotHyperbolic(2, 3, 6));
        assert!(triangle_group(3, 3, 4).is_ok());
    }

    #[test]
    fn surface_group_has_one_relator() {
        let spec = surface_group(2).unwrap();
        assert_eq!(spec.generators().len(), 8);
        assert_eq!(spec.relators.len(), 1);
        assert_eq!(spec.relators[0].len(), 8);
        assert_eq!(surface_group(3).unwrap_err(), Error::UnsupportedGenus(3));
    }

    #[test]
    fn lifts() {
        let surf = surface_group(2).unwrap();
        let lifted = lift_group(&surf, 2).unwrap();
        assert_eq!(lifted.k, 2);
        assert_eq!(lifted.expected.degree, Some(2));
        assert_eq!(lift_group(&surf, 1).unwrap(), surf);
        let tri = triangle_group(2, 3, 7).unwrap();
        assert_eq!(lift_group(&tri, 2).unwrap_err(), Error::NoConsistentLift(2));
    }

    #[test]
    fn schottky_ping_pong() {
        assert!(schottky_group(0.5).is_ok());
        assert!(matches!(schottky_group(0.0), Err(Error::PingPongFails(_))));
    }

    #[test]
    fn affine_generators_fix_infinity() {
        let spec = affine_nondiscrete().unwrap();
        for g in spec.generators().elements() {
            assert!(g.apply(0.0).abs() < 1e-15);
        }
    }

    #[test]
    fn references_parse() {
        assert_eq!(from_ref("triangle:2,3,7").unwrap().name, "triangle(2,3,7)");
        assert_eq!(from_ref("lift:2:surface:2").unwrap().k, 2);
        assert!(from_ref("nope").is_err());
        assert!(from_ref("triangle:2,3").is_err());
    }
}
