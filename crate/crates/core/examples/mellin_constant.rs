//! f(0) = log(π/2) − γ two ways, and the closed form −1/s + 2Γ(s)η(s).

use distinct_parts::asymptotics::{mellin_closed_form, mellin_constant, mellin_quadrature};

fn main() -> distinct_parts::Result<()> {
    let f0 = mellin_quadrature(0.0)?;
    println!("log(pi/2) - gamma = {:.15}", mellin_constant());
    println!("quadrature f(0)    = {f0:.15}");
    for s in [-0.5, 0.1, 0.5, 1.0, 1.5] {
        let q = mellin_quadrature(s)?;
        match mellin_closed_form(s) {
            Ok(c) => println!("s = {s:4}: quadrature {q:.12}, closed form {c:.12}"),
            Err(_) => println!("s = {s:4}: quadrature {q:.12}"),
        }
    }
    Ok(())
}
