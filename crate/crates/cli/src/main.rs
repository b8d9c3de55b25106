use std::io::Write;

use gcmeasure::ingest::{HttpTransport, OfflineTransport, Transport};
use gcmeasure_cli::{run, Context, API_BASE_ENV};

fn main() {
    let http = HttpTransport::new();
    let transport: &dyn Transport = match &http {
        Ok(t) => t,
        Err(e) => {
            eprintln!("warning: HTTP client unavailable ({e}); running offline");
            &OfflineTransport
        }
    };
    let ctx = Context {
        transport,
        api_base_env: std::env::var(API_BASE_ENV).ok(),
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut err = std::io::stderr();
    let code = run(std::env::args_os(), &ctx, &mut out, &mut err);
    let _ = out.flush();
    std::process::exit(code);
}
