use std::collections::HashMap;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::generators::{GeneratorSet, ELEMENT_TOL};
use crate::circle::Element;
use crate::error::{Error, Result};
use crate::par;

/// Default cap on the number of ball elements.
pub const DEFAULT_BALL_CAP: usize = 5_000_000;

/// Side of a fingerprint cell. Coarser than [`ELEMENT_TOL`] so that equal
/// elements always land in the same or an adjacent cell.
const CELL: f64 = 1e-6;
/// Fraction of a cell near its faces where the neighbor cell is probed too.
const PROBE: f64 = 0.05;

const NONE: u32 = u32::MAX;

/// Quantized fingerprint of a canonical element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Key {
    pub cells: [i64; 4],
    pub deck: u32,
}

impl Key {
    pub fn of(g: &Element) -> Key {
        let m = g.base().entries();
        Key {
            cells: m.map(|e| (e / CELL).floor() as i64),
            deck: g.branch(),
        }
    }

    /// Keys to probe when looking `g` up: both signs of the matrix, and the
    /// neighbor cell along every coordinate that sits close to a face.
    fn probes(g: &Element) -> Vec<Key> {
        let m = g.base().entries();
        let mut out = Vec::with_capacity(4);
        for sign in [1.0, -1.0] {
            let mut options: Vec<[i64; 4]> = vec![[0; 4]];
            for (axis, e) in m.iter().enumerate() {
                let v = sign * e / CELL;
                let base = v.floor();
                let frac = v - base;
                let mut cands = vec![base as i64];
                if frac < PROBE {
                    cands.push(base as i64 - 1);
                }
                if frac > 1.0 - PROBE {
                    cands.push(base as i64 + 1);
                }
                options = options
                    .into_iter()
                    .flat_map(|o| {
                        cands.iter().map(move |&c| {
                            let mut o = o;
                            o[axis] = c;
                            o
                        })
                    })
                    .collect();
            }
            out.extend(options.into_iter().map(|cells| Key {
                cells,
                deck: g.branch(),
            }));
        }
        out
    }
}

/// A ball of the Cayley graph, built breadth first from the identity.
///
/// Element `i` is reached from its parent by left multiplication,
/// `g_i = s · g_parent`, so stored words read in algebraic order with the
/// newest letter first. Distances are `d(g, h) = |h g⁻¹|`.
#[derive(Clone, Debug)]
pub struct CayleyBall {
    gens: GeneratorSet,
    radius: u32,
    elements: Vec<Element>,
    norms: Vec<u32>,
    parent: Vec<u32>,
    parent_gen: Vec<u32>,
    level_start: Vec<usize>,
    heads: HashMap<Key, u32>,
    chain: Vec<u32>,
    left: Vec<u32>,
    inverse: Vec<u32>,
}

enum Probe {
    Found(u32),
    New(Element),
}

impl CayleyBall {
    pub fn build(gens: &GeneratorSet, radius: u32) -> Result<Self> {
        Self::build_with_cap(gens, radius, DEFAULT_BALL_CAP)
    }

    pub fn build_with_cap(gens: &GeneratorSet, radius: u32, cap: usize) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::InvalidArgument("empty generating set".into()));
        }
        let ns = gens.len();
        let mut ball = CayleyBall {
            gens: gens.clone(),
            radius,
            elements: Vec::new(),
            norms: Vec::new(),
            parent: Vec::new(),
            parent_gen: Vec::new(),
            level_start: vec![0],
            heads: HashMap::new(),
            chain: Vec::new(),
            left: Vec::new(),
            inverse: Vec::new(),
        };
        ball.insert(Element::identity(gens.k()), 0, NONE, NONE);
        ball.level_start.push(1);

        for level in 0..radius {
            let frontier = ball.level(level);
            let probes = {
                let b = &ball;
                par::map_range(frontier.len() * ns, |t| {
                    let i = frontier.start + t / ns;
                    let s = t % ns;
                    let p = b
                        .gens
                        .element(s)
                        .compose(&b.elements[i])
                        .expect("generators share the cover degree");
                    match b.lookup(&p) {
                        Some(j) => Probe::Found(j as u32),
                        None => Probe::New(p),
                    }
                })
            };
            let mut left = vec![NONE; frontier.len() * ns];
            for (t, probe) in probes.into_iter().enumerate() {
                let i = frontier.start + t / ns;
                let s = t % ns;
                let j = match probe {
                    Probe::Found(j) => j,
                    Probe::New(p) => match ball.lookup(&p) {
                        Some(j) => j as u32,
                        None => {
                            if ball.elements.len() >= cap {
                                return Err(Error::BallTooLarge(cap));
                            }
                            ball.insert(p, level + 1, i as u32, s as u32)
                        }
                    },
                };
                left[t] = j;
            }
            ball.left.extend(left);
            ball.level_start.push(ball.elements.len());
        }

        // neighbors of the outermost sphere, without insertion
        let outer = ball.level(radius);
        let tail = {
            let b = &ball;
            par::map_range(outer.len() * ns, |t| {
                let i = outer.start + t / ns;
                let p = b
                    .gens
                    .element(t % ns)
                    .compose(&b.elements[i])
                    .expect("generators share the cover degree");
                b.lookup(&p).map_or(NONE, |j| j as u32)
            })
        };
        ball.left.extend(tail);

        let inverse = {
            let b = &ball;
            par::map_range(b.elements.len(), |i| {
                b.lookup(&b.elements[i].inverse())
                    .map_or(NONE, |j| j as u32)
            })
        };
        if let Some(i) = inverse.iter().position(|&j| j == NONE) {
            return Err(Error::OracleFailed(format!(
                "inverse of ball element {i} not found; elements are too close to separate"
            )));
        }
        ball.inverse = inverse;
        log::debug!(
            "ball radius {radius}: {} elements, sphere sizes {:?}",
            ball.len(),
            ball.sphere_sizes()
        );
        Ok(ball)
    }

    fn insert(&mut self, g: Element, norm: u32, parent: u32, gen: u32) -> u32 {
        let idx = self.elements.len() as u32;
        let key = Key::of(&g);
        let prev = self.heads.insert(key, idx).unwrap_or(NONE);
        self.chain.push(prev);
        self.elements.push(g);
        self.norms.push(norm);
        self.parent.push(parent);
        self.parent_gen.push(gen);
        idx
    }

    /// Index of the ball element equal to `g` within [`ELEMENT_TOL`].
    pub fn lookup(&self, g: &Element) -> Option<usize> {
        self.lookup_tol(g, ELEMENT_TOL)
    }

    /// Like [`lookup`](Self::lookup) with a custom tolerance (at most
    /// `PROBE · 1e-6`, the probing reach).
    pub fn lookup_tol(&self, g: &Element, tol: f64) -> Option<usize> {
        if g.k() != self.gens.k() {
            return None;
        }
        let mut best: Option<(f64, u32)> = None;
        for key in Key::probes(g) {
            let mut cur = self.heads.get(&key).copied().unwrap_or(NONE);
            while cur != NONE {
                let e = &self.elements[cur as usize];
                if e.branch() == g.branch() {
                    let d = e.base().distance(g.base());
                    if d <= tol && best.map_or(true, |(bd, bi)| (d, cur) < (bd, bi)) {
                        best = Some((d, cur));
                    }
                }
                cur = self.chain[cur as usize];
            }
        }
        best.map(|(_, i)| i as usize)
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> &Element {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    /// Word norm (BFS level).
    pub fn norm(&self, i: usize) -> u32 {
        self.norms[i]
    }

    pub fn key(&self, i: usize) -> Key {
        Key::of(&self.elements[i])
    }

    /// Index range of the sphere of radius `r`.
    pub fn level(&self, r: u32) -> Range<usize> {
        let r = r as usize;
        if r + 1 >= self.level_start.len() {
            return self.elements.len()..self.elements.len();
        }
        self.level_start[r]..self.level_start[r + 1]
    }

    pub fn sphere_sizes(&self) -> Vec<usize> {
        (0..=self.radius).map(|r| self.level(r).len()).collect()
    }

    /// One shortest word (algebraic order) for element `i`.
    pub fn word(&self, i: usize) -> Vec<usize> {
        let mut w = Vec::with_capacity(self.norms[i] as usize);
        let mut cur = i;
        while self.parent[cur] != NONE {
            w.push(self.parent_gen[cur] as usize);
            cur = self.parent[cur] as usize;
        }
        w
    }

    pub fn word_string(&self, i: usize) -> String {
        self.gens.word_string(&self.word(i))
    }

    /// Index of `s · g_i`, if inside the ball.
    pub fn left(&self, i: usize, s: usize) -> Option<usize> {
        let j = self.left[i * self.gens.len() + s];
        (j != NONE).then_some(j as usize)
    }

    /// Index of `g_i · s`, if inside the ball.
    pub fn right(&self, i: usize, s: usize) -> Option<usize> {
        let inv_s = self.gens.inverse_index(s);
        self.left(self.inverse[i] as usize, inv_s)
            .map(|j| self.inverse[j] as usize)
    }

    /// Index of `g_i⁻¹`.
    pub fn inverse_index(&self, i: usize) -> usize {
        self.inverse[i] as usize
    }

    /// Indices reachable from `i` in one Cayley edge (either direction).
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.gens.len()).filter_map(move |s| self.left(i, s))
    }

    /// Smallest entrywise distance (modulo sign) between two distinct ball
    /// elements with the same deck index.
    pub fn nearest_distinct_pair(&self) -> f64 {
        let mut pts: Vec<([f64; 4], u32, usize)> = Vec::with_capacity(2 * self.len());
        for (i, g) in self.elements.iter().enumerate() {
            let m = g.base().entries();
            pts.push((m, g.branch(), i));
            pts.push((m.map(|x| -x), g.branch(), i));
        }
        pts.sort_by(|a, b| a.0[0].total_cmp(&b.0[0]));
        let mut best = f64::INFINITY;
        for a in 0..pts.len() {
            for b in a + 1..pts.len() {
                if pts[b].0[0] - pts[a].0[0] >= best {
                    break;
                }
                if pts[a].2 == pts[b].2 || pts[a].1 != pts[b].1 {
                    continue;
                }
                let d = (0..4)
                    .map(|t| (pts[a].0[t] - pts[b].0[t]).abs())
                    .fold(0.0, f64::max);
                best = best.min(d);
            }
        }
        best
    }
}
