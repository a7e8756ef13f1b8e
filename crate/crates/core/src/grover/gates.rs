use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::floquet::{FloquetIndex, FloquetOperator, ModeTruncation};
use crate::linalg::max_abs_diff;

/// Embed a small unitary acting on a list of Floquet levels into the full
/// truncated space, identity on every other level.
pub fn embed_on_levels(
    small: &DMatrix<C64>,
    levels: &[FloquetIndex],
    trunc: ModeTruncation,
    spinning_speed: f64,
) -> FloquetOperator {
    assert_eq!(small.nrows(), levels.len());
    assert_eq!(small.ncols(), levels.len());
    let rows: Vec<usize> = levels.iter().map(|ix| ix.flatten(trunc)).collect();
    let mut seen = rows.clone();
    seen.sort_unstable();
    seen.dedup();
    assert_eq!(seen.len(), rows.len(), "levels must be distinct");
    let mut u = FloquetOperator::identity(trunc, spinning_speed);
    for (a, &ra) in rows.iter().enumerate() {
        u.matrix[(ra, ra)] = small[(a, a)];
        for (b, &rb) in rows.iter().enumerate() {
            if a != b {
                u.matrix[(ra, rb)] = small[(a, b)];
            }
        }
    }
    u
}

/// Extract the block of a full-space operator on a list of levels.
pub fn restrict_to_levels(
    u: &FloquetOperator,
    levels: &[FloquetIndex],
) -> DMatrix<C64> {
    let rows: Vec<usize> = levels.iter().map(|ix| ix.flatten(u.truncation)).collect();
    DMatrix::from_fn(rows.len(), rows.len(), |a, b| u.matrix[(rows[a], rows[b])])
}

/// 4x4 Hadamard-Walsh matrix divided by 2: symmetric, involutive,
/// entries +-1/2.
fn walsh_quarter() -> DMatrix<C64> {
    let signs = [
        [1.0, 1.0, 1.0, 1.0],
        [1.0, -1.0, 1.0, -1.0],
        [1.0, 1.0, -1.0, -1.0],
        [1.0, -1.0, -1.0, 1.0],
    ];
    DMatrix::from_fn(4, 4, |r, c| C64::new(signs[r][c] / 2.0, 0.0))
}

/// Equal-superposition transform on four designated working states.
pub fn hadamard_walsh(
    working_states: &[FloquetIndex; 4],
    trunc: ModeTruncation,
    spinning_speed: f64,
) -> FloquetOperator {
    embed_on_levels(&walsh_quarter(), working_states, trunc, spinning_speed)
}

/// Oracle of the search: phase flip of the marked working state.
pub fn conditional_flip(
    marked: FloquetIndex,
    working_states: &[FloquetIndex; 4],
    trunc: ModeTruncation,
    spinning_speed: f64,
) -> FloquetOperator {
    assert!(
        working_states.contains(&marked),
        "marked state must be one of the working states"
    );
    let mut small = DMatrix::identity(4, 4);
    for (i, s) in working_states.iter().enumerate() {
        if *s == marked {
            small[(i, i)] = C64::new(-1.0, 0.0);
        }
    }
    embed_on_levels(&small, working_states, trunc, spinning_speed)
}

/// Diffusion operator on the working subspace: matrix elements
/// 1/2 - delta_ij, i.e. J/2 - I with J the all-ones matrix. Since
/// J^2 = 4J at dimension 4, (J/2 - I)^2 = I and the operator is its own
/// inverse.
pub fn inversion_about_mean(
    working_states: &[FloquetIndex; 4],
    trunc: ModeTruncation,
    spinning_speed: f64,
) -> FloquetOperator {
    let small = DMatrix::from_fn(4, 4, |r, c| {
        C64::new(if r == c { -0.5 } else { 0.5 }, 0.0)
    });
    embed_on_levels(&small, working_states, trunc, spinning_speed)
}

/// One elementary step of a compiled gate block: a rotation in the plane
/// of two working states, or a phase on one of them. These are the
/// selective-pulse primitives a sequence is assembled from.
#[derive(Debug, Clone, Copy)]
pub enum GateEvent {
    /// cos/sin rotation between states a and b with transfer phase phi.
    Rotation { a: usize, b: usize, theta: f64, phi: f64 },
    /// Phase e^{i phi} on state a.
    Phase { a: usize, phi: f64 },
}

impl GateEvent {
    fn matrix(&self, n: usize) -> DMatrix<C64> {
        let mut m = DMatrix::identity(n, n);
        match *self {
            GateEvent::Rotation { a, b, theta, phi } => {
                let (s, c) = theta.sin_cos();
                m[(a, a)] = C64::new(c, 0.0);
                m[(b, b)] = C64::new(c, 0.0);
                m[(a, b)] = -C64::from_polar(s, -phi);
                m[(b, a)] = C64::from_polar(s, phi);
            }
            GateEvent::Phase { a, phi } => {
                m[(a, a)] = C64::from_polar(1.0, phi);
            }
        }
        m
    }

    fn inverse(&self) -> GateEvent {
        match *self {
            GateEvent::Rotation { a, b, theta, phi } => GateEvent::Rotation {
                a,
                b,
                theta: -theta,
                phi,
            },
            GateEvent::Phase { a, phi } => GateEvent::Phase { a, phi: -phi },
        }
    }
}

/// A pulse-sequence realization of a subspace unitary: an ordered list of
/// two-level primitives whose product reproduces the target matrix.
#[derive(Debug, Clone)]
pub struct GateBlock {
    pub states: Vec<FloquetIndex>,
    /// Chronological order: events[0] acts first.
    pub events: Vec<GateEvent>,
    pub net_unitary: FloquetOperator,
}

impl GateBlock {
    /// Compile a subspace unitary into two-level rotations and phases by
    /// Givens reduction. The reconstruction is checked against the
    /// target to 1e-9.
    pub fn compile(
        target: &DMatrix<C64>,
        states: &[FloquetIndex],
        trunc: ModeTruncation,
        spinning_speed: f64,
    ) -> Self {
        let n = states.len();
        assert_eq!(target.nrows(), n);
        assert_eq!(target.ncols(), n);

        // triangularize: G_m ... G_1 U = D, so chronologically U applies
        // the phases of D first and then the inverted rotations
        let mut work = target.clone();
        let mut rotations: Vec<GateEvent> = Vec::new();
        for c in 0..n {
            for r in (c + 1..n).rev() {
                let u = work[(r - 1, c)];
                let v = work[(r, c)];
                if v.norm() < 1e-15 {
                    continue;
                }
                let phi = (-v / u).arg();
                let theta = v.norm().atan2(u.norm());
                let g = GateEvent::Rotation {
                    a: r - 1,
                    b: r,
                    theta,
                    phi,
                };
                work = g.matrix(n) * work;
                rotations.push(g);
            }
        }
        let mut events: Vec<GateEvent> = (0..n)
            .map(|i| GateEvent::Phase {
                a: i,
                phi: work[(i, i)].arg(),
            })
            .collect();
        events.extend(rotations.iter().rev().map(GateEvent::inverse));

        let block = Self::from_events(states.to_vec(), events, trunc, spinning_speed);
        let rebuilt = restrict_to_levels(&block.net_unitary, states);
        assert!(
            max_abs_diff_d(&rebuilt, target) < 1e-9,
            "gate compilation failed to reproduce the target"
        );
        block
    }

    pub fn from_events(
        states: Vec<FloquetIndex>,
        events: Vec<GateEvent>,
        trunc: ModeTruncation,
        spinning_speed: f64,
    ) -> Self {
        let n = states.len();
        let mut small = DMatrix::identity(n, n);
        for e in &events {
            small = e.matrix(n) * small;
        }
        let net_unitary = embed_on_levels(&small, &states, trunc, spinning_speed);
        Self {
            states,
            events,
            net_unitary,
        }
    }

    /// The exact inverse sequence: events reversed and individually
    /// inverted.
    pub fn inverse(&self) -> Self {
        let events: Vec<GateEvent> = self.events.iter().rev().map(GateEvent::inverse).collect();
        Self::from_events(
            self.states.clone(),
            events,
            self.net_unitary.truncation,
            self.net_unitary.spinning_speed,
        )
    }
}

fn max_abs_diff_d(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).camax()
}

/// Convenience: full-space max-norm distance between two operators.
pub fn operator_distance(a: &FloquetOperator, b: &FloquetOperator) -> f64 {
    max_abs_diff(&a.matrix, &b.matrix)
}
