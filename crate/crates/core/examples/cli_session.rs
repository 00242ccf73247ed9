//! Drives the command line front end in-process.

fn main() {
    for line in [
        "vslab dist valueset --q 3 --l 2 --r 1",
        "vslab poly index --q 11 --poly 0,0,0,1,0,1",
        "vslab moments --model union --n 4 --sizes 2x2",
        "vslab asymptotic --model occupancy --t 1 --l 1000000",
    ] {
        println!("$ {line}");
        let code = vslab::cli::run(line.split(' '));
        println!("(exit {code})");
    }
}
