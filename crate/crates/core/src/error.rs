use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid machine spec: {0}")]
    InvalidSpec(String),
    #[error("rule id {id} out of range (rule count is {count})")]
    RuleIdOutOfRange { id: u64, count: u64 },
    #[error("rule count for this spec does not fit in u64")]
    RuleCountOverflow,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("cannot parse config key {0:?}: {1}")]
    BadConfigKey(String, String),
    #[error("node cap {cap} exceeded at layer {layer} (projected {projected} nodes)")]
    NodeCapExceeded { layer: u32, projected: usize, cap: usize },
    #[error("rule-step cap {cap} exceeded ({requested} rule-steps requested)")]
    RuleStepCapExceeded { requested: u64, cap: u64 },
    #[error("layer {layer} out of range (graph depth {depth})")]
    LayerOutOfRange { layer: u32, depth: u32 },
    #[error("group element mismatch: {0}")]
    GroupMismatch(String),
    #[error("invalid group parameters: {0}")]
    InvalidGroup(String),
}
