//! All partial derivatives up to order 3 of `exp(sin(xy))` from one jet
//! evaluation, against hand-differentiated closed forms.

use paracosym::jets::Jet;

fn main() {
    let (x0, y0) = (0.3, -0.7);
    let x = Jet::variable(2, 3, 0, x0);
    let y = Jet::variable(2, 3, 1, y0);
    let f = (&x * &y).sin().exp();

    let u = x0 * y0;
    let e = u.sin().exp();
    // d/dx exp(sin(xy)) = y cos(xy) e, and so on.
    let fx = y0 * u.cos() * e;
    let fxy = e * (u.cos() - u * u.sin() + u * u.cos().powi(2));
    let fxx = y0 * y0 * e * (u.cos().powi(2) - u.sin());

    println!("f        jet {:+.15}  closed form {:+.15}", f.value(), e);
    println!("f_x      jet {:+.15}  closed form {:+.15}", f.derivative(&[1, 0]), fx);
    println!("f_xx     jet {:+.15}  closed form {:+.15}", f.derivative(&[2, 0]), fxx);
    println!("f_xy     jet {:+.15}  closed form {:+.15}", f.derivative(&[1, 1]), fxy);
    println!("f_xxy    jet {:+.15}", f.derivative(&[2, 1]));
    println!("coefficients stored: {}", f.coeffs().len());
}
