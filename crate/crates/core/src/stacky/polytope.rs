use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::One;

use super::{combinations, StackyError, StackyFan};
use crate::lattice::{self, dot_rat, int_vec_to_rat, IntMatrix, RatVector};

/// Facet of the convex hull of the rays: `⟨normal, b_i⟩ = 1` on `rays`, `< 1` elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: RatVector,
    pub rays: Vec<usize>,
}

/// A face given by the rays it contains.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Face {
    pub rays: Vec<usize>,
}

impl StackyFan {
    /// Facets of `conv(b_0, …, b_{m−1})`, sorted by ray set.
    pub fn facets(&self) -> Vec<Facet> {
        let n = self.dim();
        let rays: Vec<RatVector> = self.rays().iter().map(|b| int_vec_to_rat(b)).collect();
        let mut out: Vec<Facet> = Vec::new();
        for subset in combinations(self.m(), n) {
            let m = IntMatrix::from_rows(n, &self.cone_vectors(&subset));
            let Ok(u) = lattice::solve_rational(&m, &vec![BigRational::one(); n]) else {
                continue;
            };
            if rays.iter().any(|b| dot_rat(&u, b) > BigRational::one()) {
                continue;
            }
            if out.iter().any(|f| f.normal == u) {
                continue;
            }
            let on: Vec<usize> = (0..self.m()).filter(|&i| dot_rat(&u, &rays[i]).is_one()).collect();
            out.push(Facet { normal: u, rays: on });
        }
        out.sort_by(|a, b| a.rays.cmp(&b.rays));
        out
    }

    /// All nonempty faces, obtained as intersections of facets.
    pub fn faces(&self) -> Vec<Face> {
        let facets = self.facets();
        let mut seen: BTreeSet<Vec<usize>> = facets.iter().map(|f| f.rays.clone()).collect();
        let mut frontier: Vec<Vec<usize>> = seen.iter().cloned().collect();
        while let Some(face) = frontier.pop() {
            for f in &facets {
                let meet: Vec<usize> = face.iter().filter(|i| f.rays.contains(i)).copied().collect();
                if !meet.is_empty() && seen.insert(meet.clone()) {
                    frontier.push(meet);
                }
            }
        }
        seen.into_iter().map(|rays| Face { rays }).collect()
    }

    /// Facets containing every ray of `face`.
    pub fn facets_containing(&self, face: &Face) -> Vec<Facet> {
        self.facets()
            .into_iter()
            .filter(|f| face.rays.iter().all(|i| f.rays.contains(i)))
            .collect()
    }

    /// Smallest face whose facets all contain the boundary point `b`.
    pub fn minimal_face(&self, b: &[i64]) -> Result<Face, StackyError> {
        let p = int_vec_to_rat(b);
        let containing: Vec<Facet> = self
            .facets()
            .into_iter()
            .filter(|f| dot_rat(&f.normal, &p).is_one())
            .collect();
        let Some(first) = containing.first() else {
            return Err(StackyError::PointNotOnBoundary(b.to_vec()));
        };
        let rays = first
            .rays
            .iter()
            .filter(|i| containing.iter().all(|f| f.rays.contains(i)))
            .copied()
            .collect();
        Ok(Face { rays })
    }

    /// The facet with lexicographically least ray list.
    pub fn default_facet(&self) -> Option<Facet> {
        self.facets().into_iter().next()
    }
}
