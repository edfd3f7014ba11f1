use crate::linalg;
use crate::matroid::subsets::{elements, ElementSet};
use crate::matroid::{Matroid, MatroidJson, Permutation};
use crate::rational::{format_rational, parse_rational, q, Q};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeightError {
    #[error("expected {expected} values, got {found}")]
    Length { expected: usize, found: usize },
    #[error("{0} is not a basis of the ambient matroid")]
    NotABasis(String),
    #[error("bad rational value {0:?}")]
    BadValue(String),
    #[error("duplicate entry for {0}")]
    Duplicate(String),
    #[error(transparent)]
    Matroid(#[from] crate::matroid::MatroidError),
}

/// A real lifting of the vertices of a matroid polytope, one rational per
/// basis of the ambient matroid in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weight {
    ambient: Matroid,
    values: Vec<Q>,
}

impl Weight {
    pub fn new(ambient: Matroid, values: Vec<Q>) -> Result<Self, WeightError> {
        if values.len() != ambient.num_bases() {
            return Err(WeightError::Length {
                expected: ambient.num_bases(),
                found: values.len(),
            });
        }
        Ok(Self { ambient, values })
    }

    pub fn from_integers(ambient: Matroid, values: &[i64]) -> Result<Self, WeightError> {
        Self::new(ambient, values.iter().map(|&v| q(v)).collect())
    }

    pub fn zero(ambient: Matroid) -> Self {
        let values = vec![Q::zero(); ambient.num_bases()];
        Self { ambient, values }
    }

    /// Weight that is 1 on each listed basis and 0 elsewhere.
    pub fn indicator(ambient: Matroid, sets: &[ElementSet]) -> Result<Self, WeightError> {
        let mut w = Self::zero(ambient);
        for &s in sets {
            let i = w.position(s).ok_or_else(|| WeightError::NotABasis(crate::matroid::subsets::label(s)))?;
            w.values[i] += q(1);
        }
        Ok(w)
    }

    pub fn ambient(&self) -> &Matroid {
        &self.ambient
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn bases(&self) -> Vec<ElementSet> {
        self.ambient.bases().collect()
    }

    /// Position of a basis in the value vector.
    pub fn position(&self, set: ElementSet) -> Option<usize> {
        let t = self.ambient.table();
        let idx = t.index_of(set)?;
        if self.ambient.mask() >> idx & 1 == 0 {
            return None;
        }
        Some((self.ambient.mask() & ((1u128 << idx) - 1)).count_ones() as usize)
    }

    pub fn value_of(&self, set: ElementSet) -> Option<&Q> {
        self.position(set).map(|i| &self.values[i])
    }

    pub fn scaled(&self, c: &Q) -> Self {
        Self {
            ambient: self.ambient.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &Weight) -> Self {
        assert_eq!(self.ambient, other.ambient);
        Self {
            ambient: self.ambient.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    /// `(σ·w)(σ(λ)) = w(λ)`.
    pub fn permuted(&self, sigma: &Permutation) -> Self {
        let ambient = self.ambient.permuted(sigma);
        let mut values = vec![Q::zero(); self.values.len()];
        let mut out = Self {
            ambient,
            values: Vec::new(),
        };
        for (b, v) in self.bases().into_iter().zip(&self.values) {
            let i = out_position(&out.ambient, sigma.apply_set(b));
            values[i] = v.clone();
        }
        out.values = values;
        out
    }

    /// The lineality vector `Σ c_i ℓ_i`, where `ℓ_i` is the indicator of the
    /// bases containing `i`.
    pub fn lineality(ambient: &Matroid, c: &[Q]) -> Self {
        assert_eq!(c.len(), ambient.n());
        let values = ambient
            .bases()
            .map(|b| elements(b).fold(Q::zero(), |acc, e| acc + &c[e]))
            .collect();
        Self {
            ambient: ambient.clone(),
            values,
        }
    }

    /// Orthogonal projection onto the complement of the lineality space.
    /// Weights differing by a lineality vector have the same projection.
    pub fn project_lineality(&self) -> Self {
        let n = self.ambient.n();
        let bases = self.bases();
        let mut gram = vec![vec![Q::zero(); n]; n];
        let mut rhs = vec![Q::zero(); n];
        for (b, v) in bases.iter().zip(&self.values) {
            for i in elements(*b) {
                rhs[i] += v;
                for j in elements(*b) {
                    gram[i][j] += q(1);
                }
            }
        }
        let c = linalg::solve(&gram, &rhs).expect("normal equations are consistent");
        let shift = Self::lineality(&self.ambient, &c);
        Self {
            ambient: self.ambient.clone(),
            values: self.values.iter().zip(&shift.values).map(|(a, b)| a - b).collect(),
        }
    }

    /// True if the weight lies in the lineality space.
    pub fn is_lineality(&self) -> bool {
        self.project_lineality().values.iter().all(Zero::is_zero)
    }

    pub fn to_json(&self) -> WeightJson {
        let entries = self
            .bases()
            .into_iter()
            .zip(&self.values)
            .filter(|(_, v)| !v.is_zero())
            .map(|(b, v)| Entry {
                basis: elements(b).map(|e| e + 1).collect(),
                value: format_rational(v),
            })
            .collect();
        WeightJson {
            n: self.ambient.n(),
            r: self.ambient.rank(),
            ambient: (!self.ambient.is_uniform()).then(|| self.ambient.to_json()),
            entries,
        }
    }

    pub fn from_json(j: &WeightJson) -> Result<Self, WeightError> {
        let ambient = match &j.ambient {
            Some(a) => {
                let m = Matroid::from_json(a)?;
                if m.n() != j.n || m.rank() != j.r {
                    return Err(crate::matroid::MatroidError::ShapeMismatch(j.r, j.n, m.rank(), m.n()).into());
                }
                m
            }
            None => {
                if j.r > j.n || j.n > crate::matroid::subsets::MAX_GROUND {
                    return Err(crate::matroid::MatroidError::TooLarge { r: j.r, n: j.n }.into());
                }
                if crate::matroid::subsets::binomial(j.n, j.r) > crate::matroid::subsets::MAX_SUBSETS {
                    return Err(crate::matroid::MatroidError::TooLarge { r: j.r, n: j.n }.into());
                }
                Matroid::uniform(j.r, j.n)
            }
        };
        let mut w = Self::zero(ambient);
        let mut seen = vec![false; w.values.len()];
        for e in &j.entries {
            let mut set: ElementSet = 0;
            for &x in &e.basis {
                if x == 0 || x > j.n || set >> (x - 1) & 1 == 1 {
                    return Err(WeightError::NotABasis(format!("{:?}", e.basis)));
                }
                set |= 1 << (x - 1);
            }
            let i = w
                .position(set)
                .ok_or_else(|| WeightError::NotABasis(format!("{:?}", e.basis)))?;
            if seen[i] {
                return Err(WeightError::Duplicate(format!("{:?}", e.basis)));
            }
            seen[i] = true;
            w.values[i] = parse_rational(&e.value).ok_or_else(|| WeightError::BadValue(e.value.clone()))?;
        }
        Ok(w)
    }
}

fn out_position(ambient: &Matroid, set: ElementSet) -> usize {
    let idx = ambient.table().index_of(set).expect("r-subset");
    (ambient.mask() & ((1u128 << idx) - 1)).count_ones() as usize
}

impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = WeightJson::deserialize(d)?;
        Weight::from_json(&j).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightJson {
    pub n: usize,
    pub r: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ambient: Option<MatroidJson>,
    #[serde(default)]
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub basis: Vec<usize>,
    #[serde(with = "value_string")]
    pub value: String,
}

mod value_string {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &str, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<String, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Int(i64),
        }
        Ok(match Raw::deserialize(d)? {
            Raw::Str(s) => s,
            Raw::Int(i) => i.to_string(),
        })
    }
}
