//! The bounds table for a few classes.

use framed_product::product::{bounds_table, ClassTag, Quantity};

fn main() {
    let classes = [ClassTag::Planar, ClassTag::OnePlanar, ClassTag::OptimalTwoPlanar, ClassTag::Framed(6), ClassTag::KMap(3)];
    let quantities = [Quantity::CliqueT3, Quantity::CliqueT4, Quantity::Queue, Quantity::Nonrepetitive, Quantity::Twinwidth];
    for c in classes {
        let row: Vec<String> = quantities
            .iter()
            .map(|&q| match bounds_table(c, q) {
                Ok(b) => b.value.map_or(b.formula, |v| v.to_string()),
                Err(e) => format!("n/a ({e})"),
            })
            .collect();
        println!("{c:?}: {}", row.join(", "));
        for q in quantities {
            if let Ok(b) = bounds_table(c, q) {
                for f in b.flags {
                    println!("    note: {f}");
                }
            }
        }
    }
}
