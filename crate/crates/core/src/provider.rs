use crate::rademacher::RademacherError;

/// A certified coefficient: exact value plus the distance of the raw series
/// value from it (zero for values known by definition).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientValue {
    pub value: i128,
    pub residual: f64,
}

/// Source of `c_g(n)` for the classes of one group.
pub trait CoefficientProvider: Send + Sync {
    fn group_name(&self) -> &str;

    fn has_class(&self, class: &str) -> bool;

    fn coefficient(&self, class: &str, n: i64) -> Result<CoefficientValue, RademacherError>;

    /// Warms whatever cache sits behind the provider. The default does nothing.
    fn prefetch(&self, _classes: &[String], _grades: &[i64], _jobs: usize) -> Result<(), RademacherError> {
        Ok(())
    }
}
