//! Counts script fields and prints averages next to the reported figures.

use scriptbase::stats::{census, render_text, summary, write_csv};
use scriptbase::{fixtures, KnowledgeBase};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kb = KnowledgeBase::from_texts(fixtures::CENSUS_FILES).kb;
    let rows = census(&kb);
    let local = summary(&kb)?;
    print!("{}", render_text(&rows, &local));
    println!();
    write_csv(std::io::stdout(), &rows, &local)?;
    Ok(())
}
