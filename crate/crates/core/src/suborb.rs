//! Toric Calabi–Yau suborbifolds attached to basic disk classes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::lattice::{solve_integer, IntMatrix, RatVector};
use crate::stacky::{DiskClassKind, Facet, StackyError, StackyFan};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuborbError {
    #[error("facet {facet:?} does not contain the minimal face {face:?}")]
    InvalidFacet { facet: Vec<usize>, face: Vec<usize> },
    #[error("{0:?} is not a facet of the fan polytope")]
    UnknownFacet(Vec<usize>),
    #[error("boundary point {0:?} is not a vector of the extended fan")]
    NotAFanVector(Vec<i64>),
    #[error("no hyperplane ⟨u, b⟩ = 1 through all vectors")]
    NoSuchHyperplane,
    #[error("the restricted fan is invalid: {0}")]
    InvalidSubfan(String),
    #[error(transparent)]
    Stacky(#[from] StackyError),
}

/// `X_β` as an extended stacky fan in the parent lattice.
#[derive(Clone, Debug)]
pub struct Suborbifold {
    pub parent: StackyFan,
    pub facet: Facet,
    pub fan: StackyFan,
    /// Parent index of every sub vector (rays first, then extras).
    pub index_map: Vec<usize>,
    /// Sub index of the vector carrying the basic class.
    pub class_index: usize,
}

impl Suborbifold {
    /// Sub index of a parent vector, if present.
    pub fn sub_index(&self, parent: usize) -> Option<usize> {
        self.index_map.iter().position(|&p| p == parent)
    }

    /// Zero-padded inclusion of a relation among sub vectors.
    pub fn push_curve_class(&self, d: &[BigRational]) -> RatVector {
        let mut out = vec![BigRational::zero(); self.parent.m_prime()];
        for (k, x) in d.iter().enumerate() {
            out[self.index_map[k]] = x.clone();
        }
        out
    }
}

/// Builds the suborbifold for a basic class; `facet` lists the parent ray
/// indices of a facet, defaulting to the least facet through the class.
pub fn build_suborbifold(
    fan: &StackyFan,
    class: &DiskClassKind,
    facet: Option<&[usize]>,
) -> Result<Suborbifold, SuborbError> {
    let b = fan.boundary_point(class)?;
    let face = fan.minimal_face(&b)?;
    let parent_index = match class {
        DiskClassKind::Smooth(i) => *i,
        DiskClassKind::Orbi(nu) => (fan.m()..fan.m_prime())
            .find(|&j| fan.vector(j) == nu.as_slice())
            .ok_or_else(|| SuborbError::NotAFanVector(nu.clone()))?,
    };
    let candidates = fan.facets_containing(&face);
    let chosen = match facet {
        Some(rays) => {
            let mut rays = rays.to_vec();
            rays.sort_unstable();
            let f = fan
                .facets()
                .into_iter()
                .find(|f| f.rays == rays)
                .ok_or_else(|| SuborbError::UnknownFacet(rays.clone()))?;
            if !candidates.contains(&f) {
                return Err(SuborbError::InvalidFacet {
                    facet: rays,
                    face: face.rays,
                });
            }
            f
        }
        None => candidates.into_iter().next().expect("a boundary face lies on some facet"),
    };

    let on_facet = &chosen.rays;
    let mut cones: Vec<Vec<usize>> = fan
        .max_cones()
        .iter()
        .map(|c| c.iter().filter(|i| on_facet.contains(i)).copied().collect::<Vec<_>>())
        .filter(|c: &Vec<usize>| !c.is_empty())
        .collect();
    cones.sort();
    cones.dedup();
    let maximal: Vec<Vec<usize>> = cones
        .iter()
        .filter(|c| !cones.iter().any(|d| d != *c && c.iter().all(|i| d.contains(i))))
        .cloned()
        .collect();
    let local = |i: &usize| on_facet.iter().position(|x| x == i).expect("cone ray on facet");
    let sub_cones: Vec<Vec<usize>> = maximal.iter().map(|c| c.iter().map(local).collect()).collect();
    let rays: Vec<Vec<i64>> = on_facet.iter().map(|&i| fan.rays()[i].clone()).collect();
    let skeleton = StackyFan::new(fan.dim(), rays.clone(), sub_cones.clone(), vec![])?;

    let mut index_map = on_facet.clone();
    let mut extras = Vec::new();
    for j in fan.m()..fan.m_prime() {
        if skeleton.in_support(fan.vector(j)) {
            extras.push(fan.vector(j).to_vec());
            index_map.push(j);
        }
    }
    let sub = StackyFan::new(fan.dim(), rays, sub_cones, extras)?;
    let report = sub.validate();
    if !report.is_valid() {
        let msg = report.failures.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("; ");
        return Err(SuborbError::InvalidSubfan(msg));
    }
    let class_index = index_map
        .iter()
        .position(|&p| p == parent_index)
        .ok_or_else(|| SuborbError::NotAFanVector(b.clone()))?;
    Ok(Suborbifold {
        parent: fan.clone(),
        facet: chosen,
        fan: sub,
        index_map,
        class_index,
    })
}

/// The primitive `u` with `⟨u, b⟩ = 1` for every ray and extra vector.
pub fn cy_check(fan: &StackyFan) -> Result<Vec<BigInt>, SuborbError> {
    let vectors = fan.all_vectors();
    let a = IntMatrix::from_rows(fan.dim(), &vectors);
    let ones = vec![BigInt::from(1); vectors.len()];
    solve_integer(&a, &ones).ok_or(SuborbError::NoSuchHyperplane)
}
