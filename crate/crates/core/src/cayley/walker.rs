use super::ball::CayleyBall;
use super::generators::ELEMENT_TOL;
use super::metric::Dist;
use crate::circle::Element;

/// An element built by successive one-letter multiplications, tracked as a
/// ball index while it stays inside the ball and as a matrix outside.
///
/// Inside the ball every step is an exact table lookup, so long walks carry
/// no rounding drift. Outside, the matrix is multiplied out and each step
/// tries to snap back into the ball with a tolerance that grows with the
/// accumulated size of the factors.
#[derive(Clone, Debug)]
pub struct Walker<'a> {
    ball: &'a CayleyBall,
    index: Option<usize>,
    matrix: Element,
    scale: f64,
}

impl<'a> Walker<'a> {
    pub fn at_index(ball: &'a CayleyBall, i: usize) -> Self {
        Walker {
            ball,
            index: Some(i),
            matrix: *ball.element(i),
            scale: 1.0,
        }
    }

    pub fn at_element(ball: &'a CayleyBall, g: Element) -> Self {
        let mut w = Walker {
            ball,
            index: None,
            matrix: g,
            scale: g.base().max_entry().max(1.0),
        };
        w.snap();
        w
    }

    pub fn identity(ball: &'a CayleyBall) -> Self {
        Self::at_index(ball, 0)
    }

    fn snap(&mut self) {
        let tol = ELEMENT_TOL.max(64.0 * f64::EPSILON * self.scale);
        if let Some(j) = self.ball.lookup_tol(&self.matrix, tol) {
            self.index = Some(j);
            self.matrix = *self.ball.element(j);
            self.scale = 1.0;
        }
    }

    fn grow(&mut self, s: usize) {
        let gen = self.ball.generators().element(s);
        self.scale = self.scale.max(self.matrix.base().max_entry()) * gen.base().max_entry().max(1.0) * 2.0;
    }

    /// Replace the current element `g` by `s · g`.
    pub fn left(&mut self, s: usize) {
        if let Some(i) = self.index {
            if let Some(j) = self.ball.left(i, s) {
                self.index = Some(j);
                self.matrix = *self.ball.element(j);
                return;
            }
        }
        self.grow(s);
        self.matrix = self
            .ball
            .generators()
            .element(s)
            .compose(&self.matrix)
            .expect("same cover degree");
        self.index = None;
        self.snap();
    }

    /// Replace the current element `g` by `g · s`.
    pub fn right(&mut self, s: usize) {
        if let Some(i) = self.index {
            if let Some(j) = self.ball.right(i, s) {
                self.index = Some(j);
                self.matrix = *self.ball.element(j);
                return;
            }
        }
        self.grow(s);
        self.matrix = self
            .matrix
            .compose(self.ball.generators().element(s))
            .expect("same cover degree");
        self.index = None;
        self.snap();
    }

    pub fn index(&self) -> Option<usize> {
        self.index
    }

    pub fn element(&self) -> &Element {
        &self.matrix
    }

    /// Word norm of the current element.
    pub fn norm(&self) -> Dist {
        match self.index {
            Some(i) => Dist::Exact(self.ball.norm(i)),
            None => Dist::Greater(self.ball.radius()),
        }
    }
}

impl CayleyBall {
    /// Norm of the product `s_{w[0]} ⋯ s_{w[n-1]}`.
    pub fn word_norm(&self, word: &[usize]) -> Dist {
        let mut w = Walker::identity(self);
        for &s in word.iter().rev() {
            w.left(s);
        }
        w.norm()
    }
}
