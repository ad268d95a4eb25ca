// Closed-form moments of `Z_{α,β}(u)` in three equivalent forms.

use shotnoise_lab::oracle::{z_moment_beta_form, z_moment_product_form, MomentTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for (alpha, beta) in [(0.5, 0.0), (0.5, 1.0), (0.3, 0.5), (0.8, 2.0)] {
        let table = MomentTable::new(alpha, beta, 1.0, 4)?;
        println!("alpha = {alpha}, beta = {beta}");
        for (i, m) in table.moments.iter().enumerate() {
            let k = i as u32 + 1;
            println!(
                "  k = {k}: {m:.8}  product {:.8}  beta-function {:.8}",
                z_moment_product_form(alpha, beta, k)?,
                z_moment_beta_form(alpha, beta, k)?
            );
        }
    }
    Ok(())
}
