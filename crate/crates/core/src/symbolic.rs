//! Words, substitutions, abelianization and incidence matrices.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolError {
    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(char),
}

pub const INDUCED: [char; 5] = ['1', '2', '3', '4', '5'];
pub const X_ALPHABET: [char; 2] = ['a', 'b'];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Substitution {
    pub name: String,
    pub domain: Vec<char>,
    pub codomain: Vec<char>,
    pub images: Vec<String>,
}

impl Substitution {
    pub fn new(name: &str, domain: &[char], codomain: &[char], images: &[&str]) -> Self {
        assert_eq!(domain.len(), images.len());
        assert!(images.iter().all(|w| !w.is_empty()), "images are nonempty");
        Substitution {
            name: name.to_string(),
            domain: domain.to_vec(),
            codomain: codomain.to_vec(),
            images: images.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// ψ on {1..5}: ψ(j) = 5·4^{5−j}.
    pub fn psi() -> Self {
        Self::new("psi", &INDUCED, &INDUCED, &["54444", "5444", "544", "54", "5"])
    }

    pub fn phi1() -> Self {
        Self::new("phi1", &X_ALPHABET, &INDUCED, &["22211", "222"])
    }

    pub fn phi2() -> Self {
        Self::new("phi2", &X_ALPHABET, &INDUCED, &["43", "4"])
    }

    pub fn sigma() -> Self {
        Self::new("sigma", &X_ALPHABET, &X_ALPHABET, &["aababaa", "aaa"])
    }

    pub fn image(&self, c: char) -> Result<&str, SymbolError> {
        self.domain
            .iter()
            .position(|&d| d == c)
            .map(|i| self.images[i].as_str())
            .ok_or(SymbolError::UnknownSymbol(c))
    }

    pub fn apply(&self, w: &str) -> Result<String, SymbolError> {
        let mut out = String::new();
        for c in w.chars() {
            out.push_str(self.image(c)?);
        }
        Ok(out)
    }

    /// self ∘ inner.
    pub fn compose(&self, inner: &Substitution) -> Result<Substitution, SymbolError> {
        let images = inner
            .images
            .iter()
            .map(|w| self.apply(w))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Substitution {
            name: format!("{}.{}", self.name, inner.name),
            domain: inner.domain.clone(),
            codomain: self.codomain.clone(),
            images,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AbelVector(pub Vec<u64>);

impl AbelVector {
    pub fn sum(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Σ (i+1)·wᵢ.
    pub fn weighted(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, w)| (i as u64 + 1) * w)
            .sum()
    }
}

pub fn abelianize(word: &str, alphabet: &[char]) -> Result<AbelVector, SymbolError> {
    let mut v = vec![0u64; alphabet.len()];
    for c in word.chars() {
        let i = alphabet
            .iter()
            .position(|&a| a == c)
            .ok_or(SymbolError::UnknownSymbol(c))?;
        v[i] += 1;
    }
    Ok(AbelVector(v))
}

/// Nonnegative matrix with rows indexed by the output alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncidenceMatrix {
    pub rows: Vec<Vec<u64>>,
}

impl IncidenceMatrix {
    pub fn apply(&self, v: &AbelVector) -> AbelVector {
        AbelVector(
            self.rows
                .iter()
                .map(|r| r.iter().zip(&v.0).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    pub fn mul(&self, o: &IncidenceMatrix) -> IncidenceMatrix {
        let cols = o.rows.first().map_or(0, Vec::len);
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..cols)
                    .map(|j| r.iter().zip(&o.rows).map(|(a, orow)| a * orow[j]).sum())
                    .collect()
            })
            .collect();
        IncidenceMatrix { rows }
    }
}

pub fn incidence(sub: &Substitution) -> IncidenceMatrix {
    let cols: Vec<AbelVector> = sub
        .images
        .iter()
        .map(|w| abelianize(w, &sub.codomain).expect("images use the codomain"))
        .collect();
    let rows = (0..sub.codomain.len())
        .map(|i| cols.iter().map(|c| c.0[i]).collect())
        .collect();
    IncidenceMatrix { rows }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitutions() {
        assert_eq!(Substitution::psi().apply("12").unwrap(), "544445444");
        assert_eq!(Substitution::phi1().apply("a").unwrap(), "22211");
        assert_eq!(Substitution::phi2().apply("ab").unwrap(), "434");
        assert_eq!(Substitution::phi2().apply("").unwrap(), "");
        assert_eq!(
            Substitution::sigma().apply("c"),
            Err(SymbolError::UnknownSymbol('c'))
        );
    }

    #[test]
    fn abelianizations() {
        assert_eq!(abelianize("54444", &INDUCED).unwrap().0, vec![0, 0, 0, 4, 1]);
        assert_eq!(abelianize("aababaa", &X_ALPHABET).unwrap().0, vec![5, 2]);
        assert_eq!(abelianize("", &X_ALPHABET).unwrap().0, vec![0, 0]);
        assert!(abelianize("x", &X_ALPHABET).is_err());
    }

    #[test]
    fn incidences() {
        let m = incidence(&Substitution::psi());
        assert_eq!(m.rows[3], vec![4, 3, 2, 1, 0]);
        assert_eq!(m.rows[4], vec![1, 1, 1, 1, 1]);
        assert!(m.rows[..3].iter().all(|r| r.iter().all(|&x| x == 0)));
        assert_eq!(incidence(&Substitution::sigma()).rows, vec![vec![5, 3], vec![2, 0]]);
        let p2 = incidence(&Substitution::phi2());
        assert_eq!(p2.rows, vec![vec![0, 0], vec![0, 0], vec![1, 0], vec![1, 1], vec![0, 0]]);
    }

    #[test]
    fn composition_multiplies_incidence() {
        let subs = [Substitution::psi()];
        let x_subs = [Substitution::sigma()];
        let lifts = [Substitution::phi1(), Substitution::phi2()];
        for l in &lifts {
            for s in &x_subs {
                let c = l.compose(s).unwrap();
                assert_eq!(incidence(&c), incidence(l).mul(&incidence(s)));
            }
            for p in &subs {
                let c = p.compose(l).unwrap();
                assert_eq!(incidence(&c), incidence(p).mul(&incidence(l)));
            }
        }
    }
}
