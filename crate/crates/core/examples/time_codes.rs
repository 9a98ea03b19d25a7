//! Turning timestamps into time codes on the default 5-minute, 8-day-type grid.

use chrono::NaiveDate;
use tctr::corpus::{discretize, SeasonalWeek, TimeGrid};

fn main() -> tctr::Result<()> {
    let grid = TimeGrid::default();
    let week = SeasonalWeek::default();
    println!("{} codes ({} slots per day)", grid.alphabet_size(), grid.slots_per_day());
    let samples = [
        NaiveDate::from_ymd_opt(2024, 3, 4).unwrap().and_hms_opt(8, 2, 0).unwrap(),
        NaiveDate::from_ymd_opt(2024, 3, 8).unwrap().and_hms_opt(18, 30, 0).unwrap(),
        NaiveDate::from_ymd_opt(2024, 3, 10).unwrap().and_hms_opt(9, 15, 0).unwrap(),
        NaiveDate::from_ymd_opt(2024, 8, 10).unwrap().and_hms_opt(23, 59, 0).unwrap(),
    ];
    for ts in samples {
        let code = discretize(ts, &grid, &week)?;
        let (day, minute) = grid.describe(code);
        println!("{ts} -> code {code} (day type {day}, {:02}:{:02})", minute / 60, minute % 60);
    }
    println!("3/09:15 parses to {}", grid.parse_clock("3/09:15")?);
    Ok(())
}
