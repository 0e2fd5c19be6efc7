//! Game server: runs [`boardkit_core`] games for remote clients over
//! HTTP/JSON, hands out the command stream for replication, persists
//! snapshots and serves definitions to the rules editor.

pub mod config;
mod error;
pub mod http;
pub mod protocol;
pub mod store;

use std::future::Future;
use std::sync::Arc;

pub use config::Config;
pub use error::ServerError;
pub use protocol::{handle_request, Reply, Request, Response};
pub use store::GameStore;

/// Opens the store described by `config`, binds the listen address and
/// serves until `shutdown` resolves.
pub async fn serve(config: Config, shutdown: impl Future<Output = ()> + Send + 'static) -> Result<(), ServerError> {
    let store = Arc::new(GameStore::open(&config.data_dir, config.editor_token.clone())?);
    let listener = tokio::net::TcpListener::bind(config.listen).await?;
    log::info!("listening on {}", listener.local_addr()?);
    http::serve_on(listener, store, shutdown).await?;
    Ok(())
}
