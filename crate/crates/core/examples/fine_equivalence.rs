//! Local-polytope membership by linear programming next to the CHSH test.
//!
//! cargo run --release --example fine_equivalence

use ewfs::inequality::{chsh_max_variant, local_polytope_feasible, BehaviorTable, ExpectationMatrix};

/// `v` · PR box + (1 − v) · white noise.
fn noisy_pr(v: f64) -> ewfs::Result<BehaviorTable> {
    BehaviorTable::from_fn(|x, y, a, b| {
        let agree = (a == b) != (x == 2 && y == 2);
        v * if agree { 0.5 } else { 0.0 } + (1.0 - v) * 0.25
    })
}

fn main() -> ewfs::Result<()> {
    println!("{:>5} {:>7} {:>8} {:>10}  certificate", "v", "S", "member", "residual");
    for v in [0.0, 0.3, 0.5, 0.6, 1.0 / std::f64::consts::SQRT_2, 0.9, 1.0] {
        let t = noisy_pr(v)?;
        let (s, variant) = chsh_max_variant(&ExpectationMatrix::from_table(&t))?;
        let verdict = local_polytope_feasible(&t)?;
        let certificate = match &verdict.weights {
            Some(w) => {
                let used: Vec<String> = w
                    .iter()
                    .enumerate()
                    .filter(|(_, &p)| p > 1e-9)
                    .map(|(i, p)| format!("s{i}:{p:.3}"))
                    .collect();
                used.join(" ")
            }
            None => format!("{:?} via {variant}", verdict.cause.unwrap()),
        };
        println!("{v:>5.3} {s:>7.4} {:>8} {:>10.2e}  {certificate}", verdict.member, verdict.residual);
    }
    Ok(())
}
