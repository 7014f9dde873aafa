//! Command implementations. Argument structs live next to the code that
//! consumes them; `main` only parses and dispatches.

mod build_mob;
mod eval;
mod export;
mod feasibility;
mod gen_motion;
mod run;

pub use build_mob::{build_mob, BuildMobArgs};
pub use eval::{eval, EvalArgs};
pub use export::{export, ExportArgs};
pub use feasibility::{feasibility, FeasibilityArgs};
pub use gen_motion::{gen_motion, GenMotionArgs};
pub use run::{initial_pose, run, RunArgs};
