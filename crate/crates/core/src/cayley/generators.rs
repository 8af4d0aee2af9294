use serde::{Deserialize, Serialize};

use crate::circle::Element;
use crate::error::{Error, Result};

/// Entrywise tolerance (modulo sign) under which two elements are equal.
pub const ELEMENT_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub element: Element,
}

/// A finite symmetric generating set with no repeated elements.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSet {
    gens: Vec<Generator>,
    inverse: Vec<usize>,
    k: u32,
}

/// Name of the inverse generator: `a ↔ A`, `ab ↔ BA`, otherwise a `^-1`
/// suffix is toggled.
pub fn inverse_name(name: &str) -> String {
    if !name.is_empty() && name.chars().all(|c| c.is_ascii_alphabetic()) {
        return name
            .chars()
            .rev()
            .map(|c| {
                if c.is_ascii_lowercase() {
                    c.to_ascii_uppercase()
                } else {
                    c.to_ascii_lowercase()
                }
            })
            .collect();
    }
    match name.strip_suffix("^-1") {
        Some(base) => base.to_string(),
        None => format!("{name}^-1"),
    }
}

impl GeneratorSet {
    /// Close `gens` under inverses and drop repeated elements. Generators keep
    /// their order; missing inverses are appended right after their partner.
    pub fn new(gens: Vec<Generator>) -> Result<Self> {
        let k = gens.first().map_or(1, |g| g.element.k());
        let mut out: Vec<Generator> = Vec::with_capacity(2 * gens.len());
        let contains = |list: &[Generator], e: &Element| {
            list.iter().position(|g| g.element.approx_eq(e, ELEMENT_TOL))
        };
        for g in gens {
            if g.element.k() != k {
                return Err(Error::CoverMismatch(k, g.element.k()));
            }
            if contains(&out, &g.element).is_some() {
                continue;
            }
            let inv = g.element.inverse();
            let inv_name = inverse_name(&g.name);
            out.push(g);
            if contains(&out, &inv).is_none() {
                out.push(Generator {
                    name: inv_name,
                    element: inv,
                });
            }
        }
        let mut inverse = Vec::with_capacity(out.len());
        for g in &out {
            let inv = g.element.inverse();
            let j = contains(&out, &inv).expect("closed under inverses");
            inverse.push(j);
        }
        Ok(GeneratorSet {
            gens: out,
            inverse,
            k,
        })
    }

    pub fn from_elements(named: &[(&str, Element)]) -> Result<Self> {
        Self::new(
            named
                .iter()
                .map(|(n, e)| Generator {
                    name: (*n).to_string(),
                    element: *e,
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn element(&self, i: usize) -> &Element {
        &self.gens[i].element
    }

    pub fn elements(&self) -> Vec<Element> {
        self.gens.iter().map(|g| g.element).collect()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.gens[i].name
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    /// Product `s_{w[0]} · s_{w[1]} ⋯` (the last letter acts first).
    pub fn evaluate(&self, word: &[usize]) -> Element {
        let mut acc = Element::identity(self.k);
        for &i in word.iter().rev() {
            acc = self.gens[i]
                .element
                .compose(&acc)
                .expect("generators share the cover degree");
        }
        acc
    }

    /// Word as a string of generator names; `e` for the empty word.
    pub fn word_string(&self, word: &[usize]) -> String {
        if word.is_empty() {
            return "e".into();
        }
        let short = self.gens.iter().all(|g| g.name.chars().count() == 1);
        let names: Vec<&str> = word.iter().map(|&i| self.name(i)).collect();
        if short {
            names.concat()
        } else {
            names.join(".")
        }
    }

    /// Parse a word written with [`word_string`](Self::word_string).
    pub fn parse_word(&self, s: &str) -> Result<Vec<usize>> {
        if s == "e" || s.is_empty() {
            return Ok(Vec::new());
        }
        let pieces: Vec<String> = if s.contains('.') {
            s.split('.').map(str::to_string).collect()
        } else {
            s.chars().map(|c| c.to_string()).collect()
        };
        pieces
            .iter()
            .map(|p| self.find(p).ok_or_else(|| Error::UnknownGenerator(p.clone())))
            .collect()
    }

    /// Inverse word.
    pub fn invert_word(&self, word: &[usize]) -> Vec<usize> {
        word.iter().rev().map(|&i| self.inverse[i]).collect()
    }

    /// All products of at most `radius` generators, as a new symmetric set
    /// (identity excluded). Names are concatenated words.
    pub fn enriched(&self, radius: u32) -> Result<Self> {
        let ball = super::CayleyBall::build(self, radius)?;
        let gens = (1..ball.len())
            .map(|i| {
                let w = ball.word(i);
                let name: String = w.iter().map(|&j| self.name(j)).collect();
                Generator {
                    name,
                    element: *ball.element(i),
                }
            })
            .collect();
        Self::new(gens)
    }
}
