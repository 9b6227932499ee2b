//! C interface to the blqq sampler.
//!
//! Objects cross the boundary as opaque handles created by `*_new` / `*_fit`
//! functions and released by the matching `*_free`. Every fallible function
//! returns a [`BlqqStatus`]; on failure a description is available from
//! [`blqq_last_error_message`] on the same thread until the next failing
//! call. Panics never unwind into C: they are caught and reported as
//! [`BlqqStatus::Panic`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use blqq::baselines::fit_sm_b;
use blqq::io::{parse_dataset_csv, write_chain_csv, Provenance};
use blqq::model::{predict, ChainConfig, Dataset, EffectOrders, PriorConfig};
use blqq::sampler::{run_chain, ChainOutput};
use blqq::Error;
use nalgebra::{DMatrix, DVector};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlqqStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Invalid input: bad values, dimensions or file contents.
    InvalidArgument = 2,
    /// The sampler failed numerically on valid input.
    Numeric = 3,
    /// A file could not be read or written.
    Io = 4,
    /// An output buffer is too small.
    BufferTooSmall = 5,
    /// Internal panic; the library state is unchanged.
    Panic = 6,
}

/// Which model to fit.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlqqModel {
    /// Joint latent-variable model.
    Joint = 0,
    /// Separate probit and linear models.
    Separate = 1,
}

/// Chain settings; obtain defaults from [`blqq_chain_options_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlqqChainOptions {
    pub iterations: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub seed: u64,
    pub model: BlqqModel,
}

/// Opaque dataset handle.
pub struct BlqqDataset {
    data: Dataset,
    orders: EffectOrders,
}

/// Opaque handle to a finished fit.
pub struct BlqqFit {
    chain: ChainOutput,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &Error) -> BlqqStatus {
    if err.is_numeric() {
        BlqqStatus::Numeric
    } else if matches!(err, Error::Io { .. }) {
        BlqqStatus::Io
    } else {
        BlqqStatus::InvalidArgument
    }
}

/// Run `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (BlqqStatus, String)>) -> BlqqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BlqqStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            BlqqStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (BlqqStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (BlqqStatus, String) {
    (BlqqStatus::NullPointer, format!("{what} is null"))
}

unsafe fn c_path<'a>(path: *const c_char) -> Result<&'a str, (BlqqStatus, String)> {
    if path.is_null() {
        return Err(null("path"));
    }
    CStr::from_ptr(path)
        .to_str()
        .map_err(|_| (BlqqStatus::InvalidArgument, "path is not valid UTF-8".into()))
}

/// Message of the last failure on this thread, or null if none. The string
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn blqq_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn blqq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Defaults: 10,000 iterations, 1,000 burn-in, no thinning, joint model.
#[no_mangle]
pub extern "C" fn blqq_chain_options_default() -> BlqqChainOptions {
    let d = ChainConfig::default();
    BlqqChainOptions {
        iterations: d.iterations,
        burn_in: d.burn_in,
        thin: d.thin,
        seed: d.seed,
        model: BlqqModel::Joint,
    }
}

/// Build a dataset from a row-major `n × p` design, `n` responses `y` and
/// `n` binary outcomes `z` (0 or 1). Effect orders default to all 1.
#[no_mangle]
pub unsafe extern "C" fn blqq_dataset_new(
    x: *const f64,
    y: *const f64,
    z: *const u8,
    n: usize,
    p: usize,
    out: *mut *mut BlqqDataset,
) -> BlqqStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        if x.is_null() || y.is_null() || z.is_null() {
            return Err(null("x, y or z"));
        }
        let len = n
            .checked_mul(p)
            .ok_or((BlqqStatus::InvalidArgument, "n * p overflows".to_string()))?;
        let xs = slice::from_raw_parts(x, len);
        let x = DMatrix::from_row_slice(n, p, xs);
        let y = DVector::from_column_slice(slice::from_raw_parts(y, n));
        let z = slice::from_raw_parts(z, n).to_vec();
        let data = Dataset::from_parts(x, y, z).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(BlqqDataset {
            data,
            orders: EffectOrders::linear(p),
        }));
        Ok(())
    })
}

/// Read a dataset CSV (columns `y`, `z` and predictors; optional
/// `#orders:` line).
#[no_mangle]
pub unsafe extern "C" fn blqq_dataset_from_csv(path: *const c_char, out: *mut *mut BlqqDataset) -> BlqqStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let path = c_path(path)?;
        let (data, orders) = parse_dataset_csv(path).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(BlqqDataset { data, orders }));
        Ok(())
    })
}

/// Replace the effect orders with `len` values (`len` must equal p).
#[no_mangle]
pub unsafe extern "C" fn blqq_dataset_set_orders(ds: *mut BlqqDataset, orders: *const u32, len: usize) -> BlqqStatus {
    guard(|| {
        let ds = ds.as_mut().ok_or_else(|| null("dataset"))?;
        if orders.is_null() {
            return Err(null("orders"));
        }
        if len != ds.data.p() {
            return Err((
                BlqqStatus::InvalidArgument,
                format!("{len} effect orders for {} predictors", ds.data.p()),
            ));
        }
        ds.orders = EffectOrders::new(slice::from_raw_parts(orders, len).to_vec());
        Ok(())
    })
}

/// Number of observations, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn blqq_dataset_n(ds: *const BlqqDataset) -> usize {
    ds.as_ref().map_or(0, |d| d.data.n())
}

/// Number of predictors, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn blqq_dataset_p(ds: *const BlqqDataset) -> usize {
    ds.as_ref().map_or(0, |d| d.data.p())
}

/// Release a dataset; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn blqq_dataset_free(ds: *mut BlqqDataset) {
    if !ds.is_null() {
        drop(Box::from_raw(ds));
    }
}

/// Run a chain with default priors. `options` may be null for defaults.
#[no_mangle]
pub unsafe extern "C" fn blqq_fit(
    ds: *const BlqqDataset,
    options: *const BlqqChainOptions,
    out: *mut *mut BlqqFit,
) -> BlqqStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let ds = ds.as_ref().ok_or_else(|| null("dataset"))?;
        let opts = options.as_ref().copied().unwrap_or_else(|| blqq_chain_options_default());
        let cfg = ChainConfig {
            iterations: opts.iterations,
            burn_in: opts.burn_in,
            thin: opts.thin,
            seed: opts.seed,
            ..Default::default()
        };
        let prior = PriorConfig::default();
        let chain = match opts.model {
            BlqqModel::Joint => run_chain(&ds.data, &ds.orders, &prior, &cfg),
            BlqqModel::Separate => fit_sm_b(&ds.data, &ds.orders, &prior, &cfg).map(|f| f.chain),
        }
        .map_err(lib_err)?;
        *out = Box::into_raw(Box::new(BlqqFit { chain }));
        Ok(())
    })
}

/// Release a fit; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn blqq_fit_free(fit: *mut BlqqFit) {
    if !fit.is_null() {
        drop(Box::from_raw(fit));
    }
}

/// Number of stored draws, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn blqq_fit_draw_count(fit: *const BlqqFit) -> usize {
    fit.as_ref().map_or(0, |f| f.chain.draws.len())
}

/// Posterior means. `beta1` and `beta2` must hold `p` values each;
/// `sigma2` and `rho` receive scalars.
#[no_mangle]
pub unsafe extern "C" fn blqq_fit_posterior_mean(
    fit: *const BlqqFit,
    beta1: *mut f64,
    beta2: *mut f64,
    p: usize,
    sigma2: *mut f64,
    rho: *mut f64,
) -> BlqqStatus {
    guard(|| {
        let fit = fit.as_ref().ok_or_else(|| null("fit"))?;
        if beta1.is_null() || beta2.is_null() || sigma2.is_null() || rho.is_null() {
            return Err(null("output pointer"));
        }
        let d = &fit.chain.draws;
        if p < d.p() {
            return Err((BlqqStatus::BufferTooSmall, format!("need room for {} coefficients", d.p())));
        }
        let m1 = d.mean_beta1().map_err(lib_err)?;
        let m2 = d.mean_beta2().map_err(lib_err)?;
        slice::from_raw_parts_mut(beta1, d.p()).copy_from_slice(m1.as_slice());
        slice::from_raw_parts_mut(beta2, d.p()).copy_from_slice(m2.as_slice());
        let n = d.len() as f64;
        *sigma2 = d.sigma2.iter().sum::<f64>() / n;
        *rho = d.rho.iter().sum::<f64>() / n;
        Ok(())
    })
}

/// Copy the stored ρ draws into `out` (room for `len` values).
#[no_mangle]
pub unsafe extern "C" fn blqq_fit_rho_draws(fit: *const BlqqFit, out: *mut f64, len: usize) -> BlqqStatus {
    guard(|| {
        let fit = fit.as_ref().ok_or_else(|| null("fit"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let rho = &fit.chain.draws.rho;
        if len < rho.len() {
            return Err((BlqqStatus::BufferTooSmall, format!("need room for {} draws", rho.len())));
        }
        slice::from_raw_parts_mut(out, rho.len()).copy_from_slice(rho);
        Ok(())
    })
}

/// Post-burn-in acceptance rates of σ², ρ, r₁, r₂ into `out[0..4]`; NaN
/// for a target that was held fixed.
#[no_mangle]
pub unsafe extern "C" fn blqq_fit_acceptance(fit: *const BlqqFit, out: *mut f64) -> BlqqStatus {
    guard(|| {
        let fit = fit.as_ref().ok_or_else(|| null("fit"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let a = &fit.chain.acceptance;
        let rates = [a.sigma2, a.rho, a.r1, a.r2].map(|c| c.rate().unwrap_or(f64::NAN));
        slice::from_raw_parts_mut(out, 4).copy_from_slice(&rates);
        Ok(())
    })
}

/// Posterior-mean prediction at one design row `x` of length `p`.
#[no_mangle]
pub unsafe extern "C" fn blqq_predict(
    fit: *const BlqqFit,
    x: *const f64,
    p: usize,
    y_hat: *mut f64,
    p_z1: *mut f64,
    z_hat: *mut u8,
) -> BlqqStatus {
    guard(|| {
        let fit = fit.as_ref().ok_or_else(|| null("fit"))?;
        if x.is_null() || y_hat.is_null() || p_z1.is_null() || z_hat.is_null() {
            return Err(null("argument"));
        }
        let row = DVector::from_column_slice(slice::from_raw_parts(x, p));
        let pred = predict(&fit.chain.draws, &row).map_err(lib_err)?;
        *y_hat = pred.y_hat;
        *p_z1 = pred.p_z1;
        *z_hat = pred.z_hat;
        Ok(())
    })
}

/// Write the stored draws as a chain CSV.
#[no_mangle]
pub unsafe extern "C" fn blqq_fit_write_chain(fit: *const BlqqFit, path: *const c_char) -> BlqqStatus {
    guard(|| {
        let fit = fit.as_ref().ok_or_else(|| null("fit"))?;
        let path = c_path(path)?;
        let cfg = &fit.chain.config;
        let prov = Provenance::new("ffi")
            .with("iterations", cfg.iterations)
            .with("burn_in", cfg.burn_in)
            .with("thin", cfg.thin)
            .with("seed", cfg.seed);
        write_chain_csv(path, &fit.chain.draws, &prov).map_err(lib_err)
    })
}
