//! Builds each kind of feasible family and shows canonical order and
//! uniform sampling.
//!
//! cargo run --example enumerate_families

use fair_cmab::{FamilySpec, FeasibleFamily};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn show(name: &str, spec: FamilySpec, num_arms: usize) -> fair_cmab::Result<FeasibleFamily> {
    let family = FeasibleFamily::enumerate(&spec, num_arms)?;
    let preview: Vec<String> = family
        .members()
        .iter()
        .take(8)
        .map(|s| format!("{:?}", s.arms()))
        .collect();
    println!(
        "{name:<28} |S| = {:<5} S_max = {}  {}{}",
        family.len(),
        family.s_max(),
        preview.join(" "),
        if family.len() > 8 { " ..." } else { "" }
    );
    Ok(family)
}

fn main() -> fair_cmab::Result<()> {
    show("singletons over 4 arms", FamilySpec::Singletons, 4)?;
    show("2-subsets of 5 arms", FamilySpec::KSubsets { k: 2 }, 5)?;
    show(
        "independent sets, path 0-1-2",
        FamilySpec::IndependentSets {
            edges: vec![[0, 1], [1, 2]],
            max_size: None,
        },
        3,
    )?;
    show(
        "explicit",
        FamilySpec::Explicit {
            members: vec![vec![1, 1, 0], vec![0, 0, 1], vec![1, 0, 1]],
        },
        3,
    )?;
    let big = show("5-subsets of 12 arms", FamilySpec::KSubsets { k: 5 }, 12)?;

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let picks = big.sample_distinct(4, &mut rng)?;
    println!("four uniform picks from the 792 members:");
    for i in picks {
        println!("    #{i:<4} {:?}", big.members()[i].arms());
    }

    match FeasibleFamily::enumerate_with_cap(&FamilySpec::KSubsets { k: 10 }, 30, 1_000_000) {
        Err(e) => println!("oversized family rejected: {e}"),
        Ok(f) => println!("unexpectedly enumerated {} members", f.len()),
    }
    Ok(())
}
