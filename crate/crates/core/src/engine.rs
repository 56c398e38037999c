//! One datum together with the whole tower of caches built on it: the free
//! algebra and its Gram tables, the primitive generators, `U^+` and `U`.

use std::path::PathBuf;
use std::sync::Arc;

use crate::cartan::Datum;
use crate::freealg::{FreeAlgebra, DEFAULT_HEIGHT_BUDGET};
use crate::primitive::Primitives;
use crate::ualg::UAlg;
use crate::uplus::{UPlus, DEFAULT_WINDOW};

/// Size limits and cache location shared by every layer.
#[derive(Clone, Debug)]
pub struct EngineConfig {
    /// Height bound for Gram tables of the free algebra.
    pub height_budget: usize,
    /// Height bound for the positive and negative parts of `U`.
    pub window: usize,
    /// Directory of the on-disk Gram cache; `None` disables it unless the
    /// environment variable names one.
    pub cache_dir: Option<PathBuf>,
    /// Ignore the environment variable as well (fully cache-free run).
    pub no_cache: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            height_budget: DEFAULT_HEIGHT_BUDGET,
            window: DEFAULT_WINDOW,
            cache_dir: None,
            no_cache: false,
        }
    }
}

pub struct Engine {
    config: EngineConfig,
    fa: Arc<FreeAlgebra>,
    prims: Arc<Primitives>,
    up: Arc<UPlus>,
    ua: Arc<UAlg>,
}

impl Engine {
    pub fn new(datum: Datum, config: EngineConfig) -> Self {
        let datum = Arc::new(datum);
        let mut fa = FreeAlgebra::new(datum).with_height_budget(config.height_budget);
        if !config.no_cache {
            fa = fa.with_cache_dir(config.cache_dir.clone());
        }
        let fa = Arc::new(fa);
        let prims = Arc::new(Primitives::new(fa.clone()));
        let up = Arc::new(UPlus::new(prims.clone()).with_window(config.window));
        let ua = Arc::new(UAlg::new(up.clone()));
        Engine {
            config,
            fa,
            prims,
            up,
            ua,
        }
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn datum(&self) -> &Datum {
        self.fa.datum()
    }

    pub fn free(&self) -> &Arc<FreeAlgebra> {
        &self.fa
    }

    pub fn prims(&self) -> &Arc<Primitives> {
        &self.prims
    }

    pub fn uplus(&self) -> &Arc<UPlus> {
        &self.up
    }

    pub fn ualg(&self) -> &Arc<UAlg> {
        &self.ua
    }
}
