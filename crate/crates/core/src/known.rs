//! Named matroids and weights used throughout the tests and the CLI.

use crate::matroid::subsets::{elements, parse_label, popcount, table, ElementSet};
use crate::matroid::Matroid;
use crate::subdivision::Weight;

/// Nonbases of Q_sp.
pub const QSP_NONBASES: [&str; 8] = ["126", "145", "178", "235", "248", "347", "368", "567"];

fn sets(labels: &[&str]) -> Vec<ElementSet> {
    labels
        .iter()
        .map(|l| parse_label(l).expect("valid label"))
        .collect()
}

pub fn qsp() -> Matroid {
    Matroid::from_nonbases(8, 3, &sets(&QSP_NONBASES)).expect("Q_sp is a matroid")
}

/// Rank-3 matroid whose rank-1 flats are `classes` and whose simplification
/// has exactly the given dependent triples of classes.
fn from_simplification(classes: &[ElementSet], dependent: &[[usize; 3]]) -> Matroid {
    let ground = classes.iter().fold(0, |a, &c| a | c);
    let n = 16 - ground.leading_zeros() as usize;
    assert_eq!(popcount(ground), n, "classes must partition [n]");
    let class_of = |e: usize| classes.iter().position(|&c| c >> e & 1 == 1).unwrap();
    let bases: Vec<ElementSet> = table(n, 3)
        .subsets()
        .iter()
        .copied()
        .filter(|&b| {
            let mut cs: Vec<usize> = elements(b).map(class_of).collect();
            cs.sort_unstable();
            cs.dedup();
            cs.len() == 3 && !dependent.iter().any(|d| d[..] == cs[..])
        })
        .collect();
    Matroid::from_bases(n, 3, &bases).expect("template is a matroid")
}

pub fn u_template(parts: &[ElementSet]) -> Matroid {
    assert_eq!(parts.len(), 4);
    from_simplification(parts, &[])
}

pub fn u_prime_template(line: &[ElementSet], point: ElementSet) -> Matroid {
    assert_eq!(line.len(), 3);
    let mut parts = line.to_vec();
    parts.push(point);
    from_simplification(&parts, &[[0, 1, 2]])
}

pub fn v_template(line: &[ElementSet], free: &[ElementSet]) -> Matroid {
    assert_eq!((line.len(), free.len()), (3, 2));
    let mut parts = line.to_vec();
    parts.extend_from_slice(free);
    from_simplification(&parts, &[[0, 1, 2]])
}

pub fn w_template(common: ElementSet, first: &[ElementSet], second: &[ElementSet]) -> Matroid {
    assert_eq!((first.len(), second.len()), (2, 2));
    let parts = vec![common, first[0], first[1], second[0], second[1]];
    from_simplification(&parts, &[[0, 1, 2], [0, 3, 4]])
}

/// Build a weight on the uniform `(3, 8)` matroid from `(label, value)` terms.
pub fn weight_38(terms: &[(&str, i64)]) -> Weight {
    let amb = Matroid::uniform(3, 8);
    let t = amb.table();
    let mut values = vec![0i64; t.len()];
    for &(l, v) in terms {
        let idx = t.index_of(parse_label(l).expect("valid label")).expect("triple");
        values[idx] += v;
    }
    Weight::from_integers(amb, &values).expect("weight")
}

/// Corank vector of Q_sp.
pub fn w_sp() -> Weight {
    let terms: Vec<(&str, i64)> = QSP_NONBASES.iter().map(|&l| (l, 1)).collect();
    weight_38(&terms)
}

/// Tree example with six maximal cells.
pub fn tree_example() -> Weight {
    weight_38(&[
        ("126", 1),
        ("234", 1),
        ("237", 1),
        ("238", 2),
        ("247", 1),
        ("248", 1),
        ("278", 1),
        ("347", 1),
        ("348", 1),
        ("378", 1),
        ("478", 2),
        ("568", 1),
    ])
}

/// Example whose leaf-pruned tight span has a single triangular fin.
pub fn mantis_example() -> Weight {
    weight_38(&[
        ("124", 1),
        ("125", 1),
        ("126", 2),
        ("137", 3),
        ("138", 2),
        ("145", 2),
        ("146", 1),
        ("156", 1),
        ("178", 2),
        ("234", 1),
        ("245", 1),
        ("246", 1),
        ("247", 2),
        ("248", 2),
        ("256", 1),
        ("278", 3),
        ("356", 1),
        ("378", 2),
        ("456", 1),
        ("478", 3),
        ("567", 2),
        ("568", 2),
        ("578", 2),
        ("678", 2),
    ])
}

/// Example with six fins around a star-shaped tree.
pub fn six_fin_example() -> Weight {
    weight_38(&[
        ("123", 2),
        ("124", 2),
        ("134", 2),
        ("135", 2),
        ("136", 2),
        ("137", 4),
        ("138", 3),
        ("156", 1),
        ("178", 1),
        ("234", 2),
        ("245", 1),
        ("246", 1),
        ("247", 1),
        ("248", 1),
        ("256", 1),
        ("278", 1),
        ("356", 1),
        ("378", 1),
        ("456", 1),
        ("478", 1),
        ("567", 2),
        ("568", 2),
        ("578", 2),
        ("678", 2),
    ])
}
