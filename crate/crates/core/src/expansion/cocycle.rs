use crate::circle::Element;

/// `D_x(g1, g2) = log |Dg2(x)| - log |Dg1(x)|`.
pub fn derivative_cocycle(x: f64, g1: &Element, g2: &Element) -> f64 {
    g2.log_derivative(x) - g1.log_derivative(x)
}

/// `|D_{g(x)}(g1 g⁻¹, g2 g⁻¹) - D_x(g1, g2)|`, which vanishes identically.
pub fn equivariance_residual(x: f64, g: &Element, g1: &Element, g2: &Element) -> f64 {
    let gi = g.inverse();
    let lhs = derivative_cocycle(
        g.apply(x),
        &g1.compose(&gi).expect("same cover degree"),
        &g2.compose(&gi).expect("same cover degree"),
    );
    (lhs - derivative_cocycle(x, g1, g2)).abs()
}
