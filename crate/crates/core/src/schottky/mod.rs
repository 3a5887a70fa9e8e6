//! Schottky data: generators, disks, reduced words, intervals and partitions.

mod distortion;
mod group;
mod moebius;
mod partition;
mod word;

pub use distortion::{distortion_report, tau_stats, DistortionReport, Range, TauStats};
pub use group::{validate_group, Disk, GroupSpec, SchottkyGroup};
pub use moebius::{ExtComplex, MoebiusF64, MoebiusMatrix};
pub use partition::{Partition, RefinedTerm, WordData, DEFAULT_WORD_CAP};
pub use word::Word;
