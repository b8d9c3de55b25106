//! Acquisition of indicator data: the fixture CSV, Eurostat bulk TSV files and
//! the Eurostat statistics API (JSON-stat), plus assembly into an
//! [`ObservationMatrix`](crate::model::ObservationMatrix).

mod api;
mod assemble;
mod fixture;
mod jsonstat;
mod stub;
mod tsv;

#[cfg(feature = "http")]
pub use api::HttpTransport;
pub use api::{
    fetch_dataset, ApiSource, CacheKey, HttpResponse, OfflineTransport, ResponseCache, Transport,
    DEFAULT_BASE_URL,
};
pub use assemble::{assemble_matrix, DataSource};
pub use fixture::{parse_fixture_csv, serialize_fixture_csv};
pub use jsonstat::{decode_jsonstat, encode_jsonstat};
pub use stub::StubTransport;
pub use tsv::{parse_eurostat_tsv, RawObservation};
