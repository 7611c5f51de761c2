//! Weight-sharing supernets and subnet-to-supernet assignment.

mod bandit;
mod ensemble;
mod store;

pub use bandit::BanditState;
pub use ensemble::{argmin, AssignmentRecord, SupernetEnsemble};
pub use store::{all_layout_keys, InitPolicy, StoreDocument, StoreEntry, SupernetStore};
