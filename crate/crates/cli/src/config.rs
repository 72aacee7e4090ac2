use mul_core::Limits;

#[derive(Clone, Debug)]
pub struct Config {
    pub prelude_enabled: bool,
    pub max_steps: u64,
    pub max_constraint_depth: usize,
    pub trace: bool,
    pub dump_desugared: bool,
    pub dump_prelude: bool,
}

impl Default for Config {
    fn default() -> Self {
        let limits = Limits::default();
        Config {
            prelude_enabled: true,
            max_steps: limits.max_steps,
            max_constraint_depth: limits.max_constraint_depth,
            trace: false,
            dump_desugared: false,
            dump_prelude: false,
        }
    }
}

impl Config {
    pub fn limits(&self) -> Limits {
        Limits {
            max_steps: self.max_steps,
            max_constraint_depth: self.max_constraint_depth,
        }
    }
}
