fn main() {
    std::process::exit(amd_dbscan::cli::run());
}
