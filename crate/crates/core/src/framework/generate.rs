//! Deterministic corpus generators and seeded perturbations.

use std::collections::HashSet;

use num::{BigInt, One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Edge, Framework, FrameworkError};
use crate::linalg::{Mode, Rational};

pub const NAMED_FRAMEWORKS: [&str; 6] = ["bar", "triangle", "square", "box3d", "random2d", "random3d"];

/// Perturbation offsets are `magnitude · k / 2^20` with integer `k ∈ [−2^20, 2^20]`.
const PERTURB_BITS: u32 = 20;

fn int(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

fn points(coords: &[&[i64]]) -> Vec<Vec<Rational>> {
    coords.iter().map(|c| c.iter().map(|&x| int(x)).collect()).collect()
}

fn edges(pairs: &[(usize, usize)]) -> Vec<Edge> {
    pairs.iter().map(|&(t, h)| Edge::new(t, h)).collect()
}

/// Two triangles in perspective from the origin: the outer triangle
/// `(0,4), (−3,−2), (3,−2)`, the inner triangle scaled by `t`, and three
/// connecting bars whose lines all pass through the origin.
///
/// Vertices 0–2 are outer, 3–5 inner; bar `i — i+3` connects them.
pub fn make_desargues(t: &Rational) -> Result<Framework, FrameworkError> {
    if !t.is_positive() || *t >= Rational::one() {
        return Err(FrameworkError::InvalidParameter(format!(
            "Desargues scale must lie in (0, 1), got {t}"
        )));
    }
    let outer = points(&[&[0, 4], &[-3, -2], &[3, -2]]);
    let inner: Vec<Vec<Rational>> = outer
        .iter()
        .map(|p| p.iter().map(|x| x * t).collect())
        .collect();
    let positions = outer.into_iter().chain(inner).collect();
    Framework::new(
        2,
        positions,
        edges(&[
            (0, 1),
            (1, 2),
            (2, 0),
            (3, 4),
            (4, 5),
            (5, 3),
            (0, 3),
            (1, 4),
            (2, 5),
        ]),
        Mode::Exact,
    )
}

/// Named corpus frameworks. `seed` only matters for the random variants.
pub fn make_named(name: &str, seed: u64) -> Result<Framework, FrameworkError> {
    match name {
        "bar" => Framework::new(2, points(&[&[0, 0], &[1, 0]]), edges(&[(0, 1)]), Mode::Exact),
        "triangle" => Framework::new(
            2,
            points(&[&[0, 0], &[2, 0], &[1, 2]]),
            edges(&[(0, 1), (1, 2), (2, 0)]),
            Mode::Exact,
        ),
        "square" => Framework::new(
            2,
            points(&[&[0, 0], &[1, 0], &[1, 1], &[0, 1]]),
            edges(&[(0, 1), (1, 2), (2, 3), (3, 0)]),
            Mode::Exact,
        ),
        "box3d" => Framework::new(
            3,
            points(&[
                &[0, 0, 0],
                &[1, 0, 0],
                &[1, 1, 0],
                &[0, 1, 0],
                &[0, 0, 1],
                &[1, 0, 1],
                &[1, 1, 1],
                &[0, 1, 1],
            ]),
            edges(&[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 0),
                (4, 5),
                (5, 6),
                (6, 7),
                (7, 4),
                (0, 4),
                (1, 5),
                (2, 6),
                (3, 7),
            ]),
            Mode::Exact,
        ),
        "random2d" => Ok(random_framework(2, 3..=15, seed)),
        "random3d" => Ok(random_framework(3, 3..=10, seed)),
        other => Err(FrameworkError::UnknownName(other.to_string())),
    }
}

/// Rejection-samples a connected framework with half-integer coordinates.
/// In 3D the vertices are additionally kept off a common line.
fn random_framework(dim: usize, vertex_range: std::ops::RangeInclusive<usize>, seed: u64) -> Framework {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((dim as u64) << 32));
    loop {
        let n = rng.gen_range(vertex_range.clone());
        let positions: Vec<Vec<Rational>> = (0..n)
            .map(|_| {
                (0..dim)
                    .map(|_| Rational::new(rng.gen_range(-20i64..=20).into(), 2.into()))
                    .collect()
            })
            .collect();
        let distinct: HashSet<&Vec<Rational>> = positions.iter().collect();
        if distinct.len() != n {
            continue;
        }
        // Random spanning tree keeps the graph connected; extra chords add cycles.
        let mut pairs: HashSet<(usize, usize)> = HashSet::new();
        let mut edge_list = Vec::new();
        let mut push = |a: usize, b: usize, rng: &mut ChaCha8Rng, edge_list: &mut Vec<Edge>| {
            if a == b || !pairs.insert((a.min(b), a.max(b))) {
                return;
            }
            if rng.gen_bool(0.5) {
                edge_list.push(Edge::new(a, b));
            } else {
                edge_list.push(Edge::new(b, a));
            }
        };
        for v in 1..n {
            let u = rng.gen_range(0..v);
            push(u, v, &mut rng, &mut edge_list);
        }
        let max_edges = n * (n - 1) / 2;
        let extra = rng.gen_range(0..=n + n / 2);
        for _ in 0..extra {
            if edge_list.len() == max_edges {
                break;
            }
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            push(a, b, &mut rng, &mut edge_list);
        }
        let Ok(f) = Framework::new(dim, positions, edge_list, Mode::Exact) else {
            continue;
        };
        if !f.is_connected() || (dim == 3 && f.is_collinear()) {
            continue;
        }
        return f;
    }
}

/// Shifts every coordinate by an independent offset uniform on
/// `[−magnitude, magnitude]`, drawn from `seed`. Offsets are exact rationals.
pub fn perturb(
    f: &Framework,
    magnitude: &Rational,
    seed: u64,
    mode: Mode,
) -> Result<Framework, FrameworkError> {
    if magnitude.is_negative() {
        return Err(FrameworkError::InvalidParameter(format!(
            "perturbation magnitude must be non-negative, got {magnitude}"
        )));
    }
    if magnitude.is_zero() {
        return Ok(f.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let denom = BigInt::from(1i64 << PERTURB_BITS);
    let span = 1i64 << PERTURB_BITS;
    let positions = f
        .positions()
        .iter()
        .map(|p| {
            p.iter()
                .map(|x| {
                    let k = rng.gen_range(-span..=span);
                    x + magnitude * Rational::new(k.into(), denom.clone())
                })
                .collect()
        })
        .collect();
    Framework::new(f.dim(), positions, f.edges().to_vec(), mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> Rational {
        Rational::new(1.into(), 2.into())
    }

    #[test]
    fn desargues_counts_and_concurrency() {
        let f = make_desargues(&half()).unwrap();
        assert_eq!((f.vertex_count(), f.edge_count()), (6, 9));
        // each connector's line passes through the origin
        for i in 0..3 {
            let outer = f.position(i);
            let inner = f.position(i + 3);
            let cross = &outer[0] * &inner[1] - &outer[1] * &inner[0];
            assert!(cross.is_zero());
            assert_ne!(outer, inner);
        }
    }

    #[test]
    fn desargues_rejects_bad_scale() {
        for t in [int(0), int(1), int(-1), Rational::new(3.into(), 2.into())] {
            assert!(make_desargues(&t).is_err());
        }
    }

    #[test]
    fn named_frameworks() {
        let bar = make_named("bar", 0).unwrap();
        assert_eq!((bar.vertex_count(), bar.edge_count()), (2, 1));
        let square = make_named("square", 0).unwrap();
        assert_eq!((square.vertex_count(), square.edge_count()), (4, 4));
        assert!(matches!(make_named("pentagon", 0), Err(FrameworkError::UnknownName(_))));
    }

    #[test]
    fn random_frameworks_are_deterministic_and_connected() {
        for seed in 0..30 {
            let a = make_named("random2d", seed).unwrap();
            assert_eq!(a, make_named("random2d", seed).unwrap());
            assert!(a.is_connected());
            assert!((3..=15).contains(&a.vertex_count()));
            let b = make_named("random3d", seed).unwrap();
            assert!(b.is_connected() && !b.is_collinear());
            assert!((3..=10).contains(&b.vertex_count()));
        }
    }

    #[test]
    fn zero_perturbation_is_identity() {
        let f = make_desargues(&half()).unwrap();
        assert_eq!(perturb(&f, &int(0), 9, Mode::Exact).unwrap(), f);
    }

    #[test]
    fn perturbation_stays_within_magnitude() {
        let f = make_named("square", 0).unwrap();
        let m = Rational::new(1.into(), 100.into());
        let g = perturb(&f, &m, 2, Mode::Exact).unwrap();
        assert_ne!(f, g);
        assert_eq!(g, perturb(&f, &m, 2, Mode::Exact).unwrap());
        for (p, q) in f.positions().iter().zip(g.positions()) {
            for (a, b) in p.iter().zip(q) {
                assert!((a - b).abs() <= m);
            }
        }
        assert!(perturb(&f, &-m, 2, Mode::Exact).is_err());
    }
}
