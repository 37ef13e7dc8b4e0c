//! Reads a room layout and looks up objects by cell.

use scriptbase::fixtures;
use scriptbase::grid::{parse_grid, render};

const KITCHEN: &str = "==kitchen1//
wwwwwww    w:wall
wsf  rw    s:sink
w     w    f:stove
wwwdwww    r:refrigerator
           d:door
";

fn main() -> scriptbase::Result<()> {
    let (kitchen, warnings) = parse_grid(KITCHEN)?;
    assert!(warnings.is_empty());
    println!("{} is {}x{}", kitchen.name(), kitchen.width(), kitchen.height());
    println!("(5, 1) holds {:?}", kitchen.object_at(5, 1)?);
    println!("sink cells: {:?}", kitchen.cells_of("sink"));
    print!("{}", render(&kitchen));

    let kb = fixtures::kb();
    let hotel = kb.grid("hotel-room1").expect("bundled grid");
    println!("minibar at {:?}", hotel.cells_of("minibar"));
    println!("(10, 1) holds {:?}", hotel.object_at(10, 1)?);
    Ok(())
}
