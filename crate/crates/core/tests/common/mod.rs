use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use concord::{read_table_csv, AgreementTable};

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

pub fn load_table(name: &str) -> AgreementTable {
    let file = File::open(data_path(name)).expect("fixture exists");
    read_table_csv(BufReader::new(file)).expect("fixture parses")
}

pub fn matching_table() -> AgreementTable {
    load_table("bullets_repeatability_matching.csv")
}

pub fn nonmatching_table() -> AgreementTable {
    load_table("bullets_repeatability_nonmatching.csv")
}
