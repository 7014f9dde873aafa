//! The auto-regressive control loop: canonical state encodings, the
//! policy interface with a goal-seeking analytic baseline, and the
//! rollout driver that closes the loop against a live occupancy provider
//! with field regulation in between.

mod episode;
mod policy;
mod rollout;
mod state;

pub use episode::{EpisodeFrame, EpisodeResult};
pub use policy::{BaselineLimits, BaselinePolicy, Policy, Prediction};
pub use rollout::{rollout, RolloutConfig, RolloutError};
pub use state::{
    encode_history, encode_pose_state, encode_sequence_states, ControlSignals, HistoryState,
    PoseState, TargetPoints, TargetSchedule, WindowConfig, WorldTarget,
};
