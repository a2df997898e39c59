//! Absorption terms, their truncations and the structural flags.

use reduced_measure::nonlinearity::{
    make_exponential, make_power, make_two_sided_exponential, TruncationFamily,
};
use reduced_measure::Result;

pub fn run_example() -> Result<()> {
    let gs = [
        ("t+^2", make_power(2.0)?),
        ("t+^3", make_power(3.0)?),
        ("e^t - 1", make_exponential()),
        ("two-sided exp", make_two_sided_exponential()),
    ];
    for (name, g) in &gs {
        let sub: Vec<String> = (1..=4)
            .map(|n| match g.is_subcritical(n) {
                Some(b) => format!("N={n}:{b}"),
                None => format!("N={n}:-"),
            })
            .collect();
        println!("{name:>14}: {:?} subcritical {}", g.flags(), sub.join(" "));
    }

    let g = make_exponential();
    println!("\n  t    g     min(g,8)  g(min(t,ln 9))");
    for t in [-1.0, 0.5, 2.0, 2.5, 4.0] {
        let cap = g.truncate(8.0)?;
        let arg = g.truncate_with(8.0, TruncationFamily::ArgClamp)?;
        println!("{t:4.1} {:7.3} {:7.3} {:9.3}", g.eval(t), cap.eval(t), arg.eval(t));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
