//! Grid mapping for the sweep and sampling batches. With the `parallel`
//! feature (default) the work spreads over a rayon pool; without it the
//! same call runs sequentially. Output order always matches input order,
//! so reports are identical either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn map_ordered<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}

/// Always-sequential variant, kept callable so benchmarks can compare the
/// two on the same build.
pub fn map_sequential<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_input_order() {
        let input: Vec<u64> = (0..1000).collect();
        let parallel = map_ordered(input.clone(), |x| x * x);
        let sequential = map_sequential(input, |x| x * x);
        assert_eq!(parallel, sequential);
    }
}
