use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ToleranceError {
    #[error("unknown tolerance '{0}'")]
    Unknown(String),
    #[error("tolerance '{name}' must be positive and finite, got {value}")]
    Invalid { name: String, value: f64 },
}

/// Every numerical threshold used by the pipeline, in one place.
///
/// Relative thresholds are relative to the natural scale named in each field's
/// comment. The field names double as the override keys accepted on the command line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tolerances {
    /// Coefficients below this fraction of the largest one are zero.
    pub zero_threshold: f64,
    /// Root residual `|p(r)| / (1+|r|)^deg` on the max-normalized polynomial.
    pub root_residual: f64,
    /// `|F(P)|` below this (unit-scaled F, max-normalized P) means P lies on X.
    pub inner_threshold: f64,
    /// `|F(P)|` between the inner threshold and this is rejected as ambiguous.
    pub ambiguous_threshold: f64,
    /// Gradient max-modulus below this at an inner center means a singular point.
    pub singular_threshold: f64,
    /// Minimal normalized distance between the center and the target frame.
    pub frame_degeneracy: f64,
    /// Largest vanishing coefficient allowed when deflating an inner center.
    pub deflation: f64,
    /// Polished branch points closer than this (relative) are the same point.
    pub branch_cluster: f64,
    /// Distinct branch points closer than this (relative) force a new slice.
    pub branch_separation: f64,
    /// Fiber roots closer than this (relative to fiber scale) collide.
    pub collision: f64,
    /// Newton corrector step size (relative to root modulus) regarded as converged.
    pub newton: f64,
    /// Smallest step, as a fraction of a segment, before tracking gives up.
    pub step_floor: f64,
    /// Degeneration matching: largest matched distance as a fraction of the
    /// smallest gap between target roots.
    pub matching: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            zero_threshold: 1e-12,
            root_residual: 1e-10,
            inner_threshold: 1e-8,
            ambiguous_threshold: 1e-6,
            singular_threshold: 1e-8,
            frame_degeneracy: 1e-3,
            deflation: 1e-9,
            branch_cluster: 1e-6,
            branch_separation: 1e-3,
            collision: 1e-6,
            newton: 1e-12,
            step_floor: 1.0 / (1u64 << 20) as f64,
            matching: 0.1,
        }
    }
}

impl Tolerances {
    pub fn entries(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("zero_threshold", self.zero_threshold),
            ("root_residual", self.root_residual),
            ("inner_threshold", self.inner_threshold),
            ("ambiguous_threshold", self.ambiguous_threshold),
            ("singular_threshold", self.singular_threshold),
            ("frame_degeneracy", self.frame_degeneracy),
            ("deflation", self.deflation),
            ("branch_cluster", self.branch_cluster),
            ("branch_separation", self.branch_separation),
            ("collision", self.collision),
            ("newton", self.newton),
            ("step_floor", self.step_floor),
            ("matching", self.matching),
        ]
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<(), ToleranceError> {
        if !(value.is_finite() && value > 0.0) {
            return Err(ToleranceError::Invalid {
                name: name.to_string(),
                value,
            });
        }
        let slot = match name {
            "zero_threshold" => &mut self.zero_threshold,
            "root_residual" => &mut self.root_residual,
            "inner_threshold" => &mut self.inner_threshold,
            "ambiguous_threshold" => &mut self.ambiguous_threshold,
            "singular_threshold" => &mut self.singular_threshold,
            "frame_degeneracy" => &mut self.frame_degeneracy,
            "deflation" => &mut self.deflation,
            "branch_cluster" => &mut self.branch_cluster,
            "branch_separation" => &mut self.branch_separation,
            "collision" => &mut self.collision,
            "newton" => &mut self.newton,
            "step_floor" => &mut self.step_floor,
            "matching" => &mut self.matching,
            _ => return Err(ToleranceError::Unknown(name.to_string())),
        };
        *slot = value;
        Ok(())
    }
}
