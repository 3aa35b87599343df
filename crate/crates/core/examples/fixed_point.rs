//! Solves the Tsallis-INF normalization for a few loss vectors.

use dagbandit::tsallis::{learning_rate, solve_fixed_point, ArmLosses};

fn main() -> dagbandit::Result<()> {
    let eta = learning_rate(10)?;
    for losses in [
        vec![0.0; 4],
        vec![0.0, 3.0, 7.0],
        vec![12.5, 0.3, 4.0, 4.0, 60.0],
    ] {
        let s = solve_fixed_point(&ArmLosses::from_vec(losses.clone())?, eta, 0.0)?;
        let probs: Vec<String> = s
            .strategy
            .probs()
            .iter()
            .map(|p| format!("{p:.4}"))
            .collect();
        println!(
            "L = {losses:?}\n  x* = {:.6}, p = [{}], {} Newton steps",
            s.fixed_point,
            probs.join(", "),
            s.iterations
        );
    }

    // Warm-starting from the previous solution usually converges immediately.
    let losses = ArmLosses::from_vec(vec![0.0, 3.0, 7.0])?;
    let cold = solve_fixed_point(&losses, eta, 0.0)?;
    let warm = solve_fixed_point(&losses, eta, cold.fixed_point)?;
    println!(
        "cold start: {} steps, warm start: {} steps",
        cold.iterations, warm.iterations
    );
    Ok(())
}
