//! Case scheduling for verification suites.

/// How the cases of a suite are scheduled. Results are always returned in
/// case order, so the choice never changes a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    #[cfg(feature = "parallel")]
    Parallel,
    Sequential,
}

impl Default for Execution {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        return Execution::Parallel;
        #[cfg(not(feature = "parallel"))]
        return Execution::Sequential;
    }
}

/// `f(0), …, f(count - 1)` in order.
pub fn map_cases<T, F>(exec: Execution, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..count).into_par_iter().map(f).collect()
        }
        Execution::Sequential => (0..count).map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let seq = map_cases(Execution::Sequential, 100, |i| i * i);
        assert_eq!(seq, (0..100).map(|i| i * i).collect::<Vec<_>>());
        assert_eq!(map_cases(Execution::default(), 100, |i| i * i), seq);
    }
}
