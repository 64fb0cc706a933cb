//! Key values of the tower families and the stage groups they generate.
use valtower::values::{beta_bar, gamma_bar, gamma_bar_closed, stage_group, tower_index};

fn main() {
    for p in [2u64, 3] {
        println!("p = {p}");
        println!("  j  gamma_j            beta_j           [G_j : G_j-1]  G_j-1");
        for j in 1..=6 {
            assert_eq!(gamma_bar(j, p), gamma_bar_closed(j, p));
            println!(
                "  {j}  {:<18} {:<16} {:<14} {}",
                gamma_bar(j, p).to_string(),
                beta_bar(j, p).to_string(),
                tower_index(j, p),
                stage_group(j, p)
            );
        }
    }
}
