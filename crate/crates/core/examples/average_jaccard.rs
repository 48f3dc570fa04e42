//! Average Jaccard between two ranked term lists, depth by depth.
//!
//!     cargo run --example average_jaccard

use topic_stability::ranking::{jaccard_profile, running_average_jaccard};
use topic_stability::RankedList;

fn main() -> topic_stability::Result<()> {
    let terms = ["album", "music", "best", "award", "win", "sport", "medal"];
    let r1 = RankedList::new(vec![0, 1, 2, 3, 4])?;
    let r2 = RankedList::new(vec![5, 2, 4, 6, 3])?;

    let jac = jaccard_profile(&r1, &r2, 5);
    let aj = running_average_jaccard(&r1, &r2, 5);
    println!("{:>5}  {:<32} {:<32} {:>7} {:>7}", "depth", "R1", "R2", "Jac", "AJ");
    for d in 1..=5 {
        let head = |r: &RankedList| r.head(d).iter().map(|&i| terms[i]).collect::<Vec<_>>().join(",");
        println!("{d:>5}  {:<32} {:<32} {:>7.3} {:>7.3}", head(&r1), head(&r2), jac[d - 1], aj[d - 1]);
    }
    Ok(())
}
