//! Sorted profit profiles of essential vertices and their lexicographic order.

use crate::game::{Imputation, Vertex};
use crate::rational::Rational;
use std::cmp::Ordering;
use thiserror::Error;

/// Which end of the lexicographic spectrum the solver optimizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Ascending sort; the optimum has the lexicographically largest list.
    Leximin,
    /// Descending sort; the optimum has the lexicographically smallest list.
    Leximax,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Leximin => "leximin",
            Mode::Leximax => "leximax",
        }
    }
}

/// Profits of the essential vertices, sorted ascending (leximin) or
/// descending (leximax).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    values: Vec<Rational>,
    mode: Mode,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProfileError {
    #[error("cannot compare a {0:?} profile with a {1:?} profile")]
    ModeMismatch(Mode, Mode),
    #[error("profiles have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
}

impl Profile {
    pub fn from_values(mut values: Vec<Rational>, mode: Mode) -> Self {
        match mode {
            Mode::Leximin => values.sort(),
            Mode::Leximax => values.sort_by(|a, b| b.cmp(a)),
        }
        Profile { values, mode }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Plain lexicographic comparison at the first differing index.
    /// In leximin mode Greater means `self` is leximin-better; in leximax
    /// mode Greater means `self` is leximax-worse.
    pub fn compare(&self, other: &Profile) -> Result<Ordering, ProfileError> {
        if self.mode != other.mode {
            return Err(ProfileError::ModeMismatch(self.mode, other.mode));
        }
        if self.values.len() != other.values.len() {
            return Err(ProfileError::LengthMismatch(
                self.values.len(),
                other.values.len(),
            ));
        }
        for (a, b) in self.values.iter().zip(other.values.iter()) {
            match a.cmp_val(b) {
                Ordering::Equal => continue,
                ord => return Ok(ord),
            }
        }
        Ok(Ordering::Equal)
    }
}

/// Builds the profile of `imputation` restricted to the given essential vertices.
pub fn profile_of(imputation: &Imputation, essentials: &[Vertex], mode: Mode) -> Profile {
    let values = essentials
        .iter()
        .map(|&q| imputation.get(q).clone())
        .collect();
    Profile::from_values(values, mode)
}

/// Free-function form of [`Profile::compare`].
pub fn compare_profiles(a: &Profile, b: &Profile) -> Result<Ordering, ProfileError> {
    a.compare(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(values: &[i64], mode: Mode) -> Profile {
        Profile::from_values(
            values.iter().map(|&x| Rational::from_int(x)).collect(),
            mode,
        )
    }

    #[test]
    fn leximin_sorts_ascending() {
        // final profits of the worked 2x3 fixture
        let imp = Imputation {
            u: vec![Rational::from_int(70), Rational::from_int(30)],
            v: vec![
                Rational::from_int(30),
                Rational::from_int(30),
                Rational::from_int(0),
            ],
        };
        let essentials = [Vertex::u(0), Vertex::u(1), Vertex::v(0), Vertex::v(1)];
        let p = profile_of(&imp, &essentials, Mode::Leximin);
        assert_eq!(
            p.values(),
            &[
                Rational::from_int(30),
                Rational::from_int(30),
                Rational::from_int(30),
                Rational::from_int(70)
            ]
        );
    }

    #[test]
    fn single_edge_profile() {
        let imp = Imputation {
            u: vec![Rational::from_int(5)],
            v: vec![Rational::from_int(5)],
        };
        let p = profile_of(&imp, &[Vertex::u(0), Vertex::v(0)], Mode::Leximin);
        assert_eq!(p.values(), &[Rational::from_int(5), Rational::from_int(5)]);
    }

    #[test]
    fn leximax_sorts_descending() {
        let p = ints(&[55, 45, 15, 55], Mode::Leximax);
        let expect: Vec<Rational> = [55, 55, 45, 15]
            .iter()
            .map(|&x| Rational::from_int(x))
            .collect();
        assert_eq!(p.values(), expect.as_slice());
    }

    #[test]
    fn dominance_comparison() {
        // (30,30,30,70) beats (20,40,40,60) at index 0
        let better = ints(&[30, 30, 30, 70], Mode::Leximin);
        let worse = ints(&[20, 40, 40, 60], Mode::Leximin);
        assert_eq!(better.compare(&worse).unwrap(), Ordering::Greater);
        assert_eq!(better.compare(&better).unwrap(), Ordering::Equal);
        // first difference at index 2
        let a = ints(&[30, 30, 40, 70], Mode::Leximin);
        let b = ints(&[30, 30, 30, 80], Mode::Leximin);
        assert_eq!(a.compare(&b).unwrap(), Ordering::Greater);
    }

    #[test]
    fn mismatches_are_errors() {
        let a = ints(&[1, 2], Mode::Leximin);
        let b = ints(&[1, 2], Mode::Leximax);
        assert!(a.compare(&b).is_err());
        let c = ints(&[1, 2, 3], Mode::Leximin);
        assert!(a.compare(&c).is_err());
    }

    #[test]
    fn permutation_invariance() {
        let imp = Imputation {
            u: vec![Rational::from_int(3), Rational::from_int(1)],
            v: vec![Rational::from_int(2)],
        };
        let a = profile_of(
            &imp,
            &[Vertex::u(0), Vertex::u(1), Vertex::v(0)],
            Mode::Leximin,
        );
        let b = profile_of(
            &imp,
            &[Vertex::v(0), Vertex::u(1), Vertex::u(0)],
            Mode::Leximin,
        );
        assert_eq!(a, b);
    }

    fn rational_vec(len: usize) -> impl Strategy<Value = Vec<Rational>> {
        proptest::collection::vec((0i64..50, 1i64..6), len).prop_map(|pairs| {
            pairs
                .into_iter()
                .map(|(p, q)| Rational::parse(&format!("{}/{}", p, q)).unwrap())
                .collect()
        })
    }

    proptest! {
        // total order: antisymmetric, transitive, total on same-length same-mode profiles
        #[test]
        fn compare_is_total_order(a in rational_vec(5), b in rational_vec(5), c in rational_vec(5)) {
            let pa = Profile::from_values(a, Mode::Leximin);
            let pb = Profile::from_values(b, Mode::Leximin);
            let pc = Profile::from_values(c, Mode::Leximin);
            let ab = pa.compare(&pb).unwrap();
            let ba = pb.compare(&pa).unwrap();
            prop_assert_eq!(ab, ba.reverse());
            if ab == Ordering::Equal {
                prop_assert_eq!(pa.values(), pb.values());
            }
            let bc = pb.compare(&pc).unwrap();
            if ab != Ordering::Greater && bc != Ordering::Greater {
                prop_assert_ne!(pa.compare(&pc).unwrap(), Ordering::Greater);
            }
        }
    }
}
