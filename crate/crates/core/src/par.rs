//! Data-parallel map helpers.
//!
//! With the `parallel` feature (on by default) the top-level functions run on
//! the rayon thread pool; without it they fall back to plain iterators. Both
//! flavours stay reachable through [`sequential`] and [`parallel`] so the
//! benches can compare them in one build. Output order always follows input
//! order.

pub mod sequential {
    pub fn map_collect<T, R, F>(items: &[T], f: F) -> Vec<R>
    where
        F: Fn(&T) -> R,
    {
        items.iter().map(f).collect()
    }

    pub fn try_map_collect<T, R, E, F>(items: &[T], f: F) -> Result<Vec<R>, E>
    where
        F: Fn(&T) -> Result<R, E>,
    {
        items.iter().map(f).collect()
    }
}

#[cfg(feature = "parallel")]
pub mod parallel {
    use rayon::prelude::*;

    pub fn map_collect<T, R, F>(items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        items.par_iter().map(f).collect()
    }

    pub fn try_map_collect<T, R, E, F>(items: &[T], f: F) -> Result<Vec<R>, E>
    where
        T: Sync,
        R: Send,
        E: Send,
        F: Fn(&T) -> Result<R, E> + Sync + Send,
    {
        items.par_iter().map(f).collect()
    }
}

#[cfg(feature = "parallel")]
pub use self::parallel::{map_collect, try_map_collect};

#[cfg(not(feature = "parallel"))]
pub use self::sequential::{map_collect, try_map_collect};

/// Name of the active backend, for reports.
pub fn backend() -> &'static str {
    if cfg!(feature = "parallel") {
        "rayon"
    } else {
        "sequential"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_order() {
        let xs: Vec<u32> = (0..1000).collect();
        let ys = map_collect(&xs, |x| x * 2);
        assert_eq!(ys, sequential::map_collect(&xs, |x| x * 2));
        assert_eq!(ys[999], 1998);
    }

    #[test]
    fn try_map_reports_error() {
        let xs: Vec<i32> = (-3..3).collect();
        let r: Result<Vec<i32>, String> =
            try_map_collect(&xs, |&x| if x == 1 { Err(format!("bad {x}")) } else { Ok(x) });
        assert_eq!(r.unwrap_err(), "bad 1");
    }
}
