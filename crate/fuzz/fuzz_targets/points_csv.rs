#![no_main]

use libfuzzer_sys::fuzz_target;
use qmcbench::io::{read_points_csv, write_points_csv};

fuzz_target!(|data: &[u8]| {
    if let Ok(points) = read_points_csv(data) {
        let mut buf = Vec::new();
        write_points_csv(&mut buf, &points).unwrap();
        assert_eq!(read_points_csv(buf.as_slice()).unwrap(), points);
    }
});
