pub mod error;
pub mod scalar;
pub mod landsberg;
pub mod littlewood;
pub mod oracle;
pub mod step;
pub mod takagi;
