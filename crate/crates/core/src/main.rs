use std::process::ExitCode;

fn main() -> ExitCode {
    match geo_route_sim::cli::run(std::env::args_os()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("geo-route-sim: {}", e.message.trim_end());
            ExitCode::from(e.code as u8)
        }
    }
}
