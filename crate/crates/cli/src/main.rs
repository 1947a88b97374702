fn main() {
    println!("outflux: pipeline wiring pending");
}
