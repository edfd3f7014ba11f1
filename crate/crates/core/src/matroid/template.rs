//! Recognition of the grouped template matroids U, U', V, W and of Q_sp.

use super::subsets::{label, popcount, ElementSet};
use super::{Matroid, Permutation};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TemplateKind {
    U,
    #[serde(rename = "U'")]
    UPrime,
    V,
    W,
    #[serde(rename = "Q_sp")]
    Qsp,
    #[serde(rename = "none")]
    None,
}

/// A template match: `parts` lists the blocks in schema order.
///
/// * `U`: four blocks, all symmetric.
/// * `U'`: three blocks spanning the rank-2 part, then the rank-1 block.
/// * `V`: three collinear blocks, then the two free blocks.
/// * `W`: the common block, then the two pairs completing each line.
/// * `Q_sp`: the eight singletons.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupedTemplate {
    pub kind: TemplateKind,
    pub parts: Vec<ElementSet>,
}

impl GroupedTemplate {
    fn none() -> Self {
        Self {
            kind: TemplateKind::None,
            parts: Vec::new(),
        }
    }

    /// Dimension of the thin Schubert cell of a U, U', V or W template.
    pub fn dimension(&self) -> Option<usize> {
        let total: usize = self.parts.iter().map(|&p| popcount(p)).sum();
        match self.kind {
            TemplateKind::U | TemplateKind::W => Some(total - 1),
            TemplateKind::UPrime => Some(total - 2),
            TemplateKind::V => Some(total),
            TemplateKind::Qsp | TemplateKind::None => None,
        }
    }

    pub fn permuted(&self, sigma: &Permutation) -> Self {
        let mut t = Self {
            kind: self.kind,
            parts: self.parts.iter().map(|&p| sigma.apply_set(p)).collect(),
        };
        t.normalize();
        t
    }

    fn normalize(&mut self) {
        let key = |p: &ElementSet| p.trailing_zeros();
        match self.kind {
            TemplateKind::U | TemplateKind::Qsp => self.parts.sort_by_key(key),
            TemplateKind::UPrime => self.parts[..3].sort_by_key(key),
            TemplateKind::V => {
                self.parts[..3].sort_by_key(key);
                self.parts[3..].sort_by_key(key);
            }
            TemplateKind::W => {
                self.parts[1..3].sort_by_key(key);
                self.parts[3..5].sort_by_key(key);
                if key(&self.parts[3]) < key(&self.parts[1]) {
                    self.parts.swap(1, 3);
                    self.parts.swap(2, 4);
                }
            }
            TemplateKind::None => {}
        }
    }

    /// Display form such as `U(1,2,6,34578)`.
    pub fn describe(&self) -> String {
        let p: Vec<String> = self.parts.iter().map(|&s| label(s).replace(',', "")).collect();
        match self.kind {
            TemplateKind::U => format!("U({})", p.join(",")),
            TemplateKind::UPrime => format!("U'({};{})", p[..3].join(","), p[3]),
            TemplateKind::V => format!("V({};{})", p[..3].join(","), p[3..].join(",")),
            TemplateKind::W => format!("W({};{};{})", p[0], p[1..3].join(","), p[3..].join(",")),
            TemplateKind::Qsp => "Q_sp".to_string(),
            TemplateKind::None => "none".to_string(),
        }
    }
}

/// Recognize `Q` as one of the template matroids.
pub fn classify_template(q: &Matroid) -> GroupedTemplate {
    if q.rank() != 3 {
        return GroupedTemplate::none();
    }
    let Ok(classes) = q.parallel_classes() else {
        return GroupedTemplate::none();
    };
    let comps = q.components();
    let rank_of_classes = |idx: &[usize]| q.rank_of(idx.iter().fold(0, |a, &i| a | classes[i]));
    let mut t = match (comps.len(), classes.len()) {
        (2, 4) => {
            // Rank-2 part with three classes plus a rank-1 block.
            let (two, one) = if q.rank_of(comps[0]) == 1 {
                (comps[1], comps[0])
            } else {
                (comps[0], comps[1])
            };
            if q.rank_of(one) != 1 || !classes.contains(&one) {
                return GroupedTemplate::none();
            }
            let mut parts: Vec<ElementSet> = classes.iter().copied().filter(|&c| c & two == c).collect();
            if parts.len() != 3 {
                return GroupedTemplate::none();
            }
            parts.push(one);
            GroupedTemplate {
                kind: TemplateKind::UPrime,
                parts,
            }
        }
        (1, 4) => {
            let all_independent = triples(4).iter().all(|t| rank_of_classes(t) == 3);
            if !all_independent {
                return GroupedTemplate::none();
            }
            GroupedTemplate {
                kind: TemplateKind::U,
                parts: classes.clone(),
            }
        }
        (1, 5) => {
            let collinear: Vec<[usize; 3]> = triples(5)
                .into_iter()
                .filter(|t| rank_of_classes(t) == 2)
                .collect();
            match collinear.as_slice() {
                [line] => {
                    let mut parts: Vec<ElementSet> = line.iter().map(|&i| classes[i]).collect();
                    parts.extend((0..5).filter(|i| !line.contains(i)).map(|i| classes[i]));
                    GroupedTemplate {
                        kind: TemplateKind::V,
                        parts,
                    }
                }
                [l1, l2] => {
                    let common: Vec<usize> = l1.iter().copied().filter(|i| l2.contains(i)).collect();
                    if common.len() != 1 {
                        return GroupedTemplate::none();
                    }
                    let c = common[0];
                    let mut parts = vec![classes[c]];
                    parts.extend(l1.iter().filter(|&&i| i != c).map(|&i| classes[i]));
                    parts.extend(l2.iter().filter(|&&i| i != c).map(|&i| classes[i]));
                    GroupedTemplate {
                        kind: TemplateKind::W,
                        parts,
                    }
                }
                _ => return GroupedTemplate::none(),
            }
        }
        (1, 8) if q.n() == 8 => {
            // Simple sparse paving with eight nonbases.
            let nonbases: Vec<ElementSet> = q.nonbases().collect();
            let sparse = nonbases.len() == 8
                && nonbases.iter().enumerate().all(|(i, &a)| {
                    nonbases[i + 1..].iter().all(|&b| popcount(a & b) <= 1)
                });
            if !sparse {
                return GroupedTemplate::none();
            }
            GroupedTemplate {
                kind: TemplateKind::Qsp,
                parts: classes.clone(),
            }
        }
        _ => return GroupedTemplate::none(),
    };
    t.normalize();
    t
}

fn triples(k: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                out.push([a, b, c]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::known;
    use crate::matroid::subsets::parse_label;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn s(l: &str) -> ElementSet {
        parse_label(l).unwrap()
    }

    #[test]
    fn u_template_from_rank_one_flats() {
        let q = known::u_template(&[s("34578"), s("1"), s("2"), s("6")]);
        let t = classify_template(&q);
        assert_eq!(t.kind, TemplateKind::U);
        assert_eq!(t.describe(), "U(1,2,34578,6)");
        assert_eq!(t.dimension(), Some(7));
    }

    #[test]
    fn all_templates_recognized_with_dimensions() {
        let up = known::u_prime_template(&[s("12"), s("34"), s("56")], s("78"));
        let t = classify_template(&up);
        assert_eq!(t.kind, TemplateKind::UPrime);
        assert_eq!(t.parts, vec![s("12"), s("34"), s("56"), s("78")]);
        assert_eq!(t.dimension(), Some(6));

        let v = known::v_template(&[s("12"), s("34"), s("56")], &[s("7"), s("8")]);
        let t = classify_template(&v);
        assert_eq!(t.kind, TemplateKind::V);
        assert_eq!(t.dimension(), Some(8));

        let w = known::w_template(s("1"), &[s("2"), s("4")], &[s("3"), s("5")]);
        let t = classify_template(&w);
        assert_eq!(t.kind, TemplateKind::W);
        assert_eq!(t.describe(), "W(1;2,4;3,5)");
        assert_eq!(t.dimension(), Some(4));
    }

    #[test]
    fn qsp_orbit_and_uniform() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let q = known::qsp();
        for _ in 0..10 {
            let mut img: Vec<u8> = (0..8).collect();
            img.shuffle(&mut rng);
            let sigma = Permutation::new(img).unwrap();
            assert_eq!(classify_template(&q.permuted(&sigma)).kind, TemplateKind::Qsp);
        }
        assert_eq!(classify_template(&Matroid::uniform(3, 8)).kind, TemplateKind::None);
    }

    #[test]
    fn classification_is_equivariant() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let samples = [
            known::u_template(&[s("34578"), s("1"), s("2"), s("6")]),
            known::u_prime_template(&[s("1"), s("23"), s("456")], s("78")),
            known::v_template(&[s("1"), s("23"), s("4")], &[s("567"), s("8")]),
            known::w_template(s("12"), &[s("3"), s("4")], &[s("56"), s("78")]),
        ];
        for q in &samples {
            let t = classify_template(q);
            assert_ne!(t.kind, TemplateKind::None);
            for _ in 0..10 {
                let mut img: Vec<u8> = (0..8).collect();
                img.shuffle(&mut rng);
                let sigma = Permutation::new(img).unwrap();
                assert_eq!(classify_template(&q.permuted(&sigma)), t.permuted(&sigma));
            }
        }
    }
}
