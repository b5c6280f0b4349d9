//! The perceptron on unit vectors, and seeded datasets with a known margin.
//!
//! Dataset files hold one `b x_1 ... x_d` row per point, `b` in {-1, +1}.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::ParametricError;

/// Allowed deviation of a point's norm from 1.
pub const UNIT_TOLERANCE: f64 = 1e-12;
/// Candidate points drawn per requested point before giving up.
pub const REJECTION_BUDGET_PER_POINT: usize = 10_000;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// A unit normal and the margin it was constructed to achieve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginWitness {
    pub w_star: Vec<f64>,
    pub mu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerceptronDataset {
    points: Vec<Vec<f64>>,
    labels: Vec<i8>,
    witness: Option<MarginWitness>,
}

impl PerceptronDataset {
    pub fn new(
        points: Vec<Vec<f64>>,
        labels: Vec<i8>,
        witness: Option<MarginWitness>,
    ) -> Result<Self, ParametricError> {
        if points.is_empty() {
            return Err(ParametricError::NoPoints);
        }
        if points.len() != labels.len() {
            return Err(ParametricError::LabelCount {
                points: points.len(),
                labels: labels.len(),
            });
        }
        let dim = points[0].len();
        for (index, x) in points.iter().enumerate() {
            if x.len() != dim || dim == 0 {
                return Err(ParametricError::Dimension { index });
            }
            if (norm(x) - 1.0).abs() > UNIT_TOLERANCE {
                return Err(ParametricError::NotUnit { index });
            }
        }
        if let Some(index) = labels.iter().position(|&b| b != 1 && b != -1) {
            return Err(ParametricError::InvalidLabel { index });
        }
        if let Some(w) = &witness {
            if w.w_star.len() != dim {
                return Err(ParametricError::Dimension {
                    index: points.len(),
                });
            }
            if let Some(index) = (0..points.len())
                .find(|&i| f64::from(labels[i]) * dot(&w.w_star, &points[i]) < w.mu)
            {
                return Err(ParametricError::WitnessViolated { index });
            }
        }
        Ok(Self {
            points,
            labels,
            witness,
        })
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn labels(&self) -> &[i8] {
        &self.labels
    }

    pub fn witness(&self) -> Option<&MarginWitness> {
        self.witness.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Rows are renormalized to unit length on load.
    pub fn parse(text: &str) -> Result<Self, ParametricError> {
        let mut points = Vec::new();
        let mut labels = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: &str| ParametricError::Syntax {
                line: i + 1,
                message: message.to_string(),
            };
            let mut fields = line.split_whitespace();
            let label = match fields.next() {
                Some("1" | "+1") => 1,
                Some("-1") => -1,
                _ => return Err(err("label must be -1 or +1")),
            };
            let x = fields
                .map(|tok| tok.parse::<f64>().map_err(|_| err("expected a number")))
                .collect::<Result<Vec<_>, _>>()?;
            let len = norm(&x);
            if !(len.is_finite() && len > 0.0) {
                return Err(err("point must be nonzero"));
            }
            points.push(x.into_iter().map(|v| v / len).collect());
            labels.push(label);
        }
        Self::new(points, labels, None)
    }

    /// Shortest round-tripping float rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (x, &b) in self.points.iter().zip(&self.labels) {
            out.push_str(if b > 0 { "+1" } else { "-1" });
            for v in x {
                out.push_str(&format!(" {v:?}"));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerceptronStep {
    pub norm_sq: f64,
    /// `w_t . w_star`, when the dataset carries a witness.
    pub alignment: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerceptronTrace {
    pub final_w: Vec<f64>,
    pub updates: usize,
    /// One entry per weight vector `w_1, ..., w_{updates+1}`.
    pub step_log: Vec<PerceptronStep>,
    pub converged: bool,
}

/// Starts from `w = 0` and repeatedly adds `b_i x_i` for the first point in
/// index order with `b_i (w . x_i) <= 0`; a zero inner product counts as a
/// mistake for either label.
pub fn perceptron_train(dataset: &PerceptronDataset, max_updates: usize) -> PerceptronTrace {
    let mut w = vec![0.0; dataset.dim()];
    let w_star = dataset.witness().map(|m| m.w_star.as_slice());
    let step = |w: &[f64]| PerceptronStep {
        norm_sq: dot(w, w),
        alignment: w_star.map(|ws| dot(w, ws)),
    };
    let mut step_log = vec![step(&w)];
    let mut updates = 0;
    let converged = loop {
        let mistake = dataset
            .points
            .iter()
            .zip(&dataset.labels)
            .find(|(x, &b)| f64::from(b) * dot(&w, x) <= 0.0);
        let Some((x, &b)) = mistake else {
            break true;
        };
        if updates == max_updates {
            break false;
        }
        let b = f64::from(b);
        w.iter_mut().zip(x).for_each(|(wi, xi)| *wi += b * xi);
        updates += 1;
        step_log.push(step(&w));
    };
    PerceptronTrace {
        final_w: w,
        updates,
        step_log,
        converged,
    }
}

fn unit_gaussian(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let len = norm(&v);
        if len > 1e-9 {
            return v.into_iter().map(|x| x / len).collect();
        }
    }
}

/// `n` uniformly random unit points with `|w_star . x| >= mu`, labelled by
/// the side of the hyperplane normal to a random unit `w_star`.
pub fn margin_dataset(
    d: usize,
    n: usize,
    mu: f64,
    seed: u64,
) -> Result<PerceptronDataset, ParametricError> {
    if d < 2 {
        return Err(ParametricError::Dimension { index: 0 });
    }
    if !(mu > 0.0 && mu < 1.0) {
        return Err(ParametricError::InvalidMargin(mu));
    }
    if n == 0 {
        return Err(ParametricError::NoPoints);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w_star = unit_gaussian(&mut rng, d);
    let mut points = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    let budget = n.saturating_mul(REJECTION_BUDGET_PER_POINT);
    let mut drawn = 0;
    while points.len() < n {
        if drawn == budget {
            return Err(ParametricError::RejectionBudget { mu, d, drawn });
        }
        drawn += 1;
        let x = unit_gaussian(&mut rng, d);
        let side = dot(&w_star, &x);
        if side.abs() >= mu {
            labels.push(if side > 0.0 { 1 } else { -1 });
            points.push(x);
        }
    }
    PerceptronDataset::new(points, labels, Some(MarginWitness { w_star, mu }))
}

/// `min_i b_i (w . x_i) / |w|`: a lower bound on the margin when positive.
pub fn margin_lower_bound(dataset: &PerceptronDataset, w: &[f64]) -> Result<f64, ParametricError> {
    if w.len() != dataset.dim() {
        return Err(ParametricError::Dimension { index: 0 });
    }
    let len = norm(w);
    if len == 0.0 {
        return Err(ParametricError::ZeroVector);
    }
    Ok(dataset
        .points
        .iter()
        .zip(&dataset.labels)
        .map(|(x, &b)| f64::from(b) * dot(w, x) / len)
        .fold(f64::INFINITY, f64::min))
}
