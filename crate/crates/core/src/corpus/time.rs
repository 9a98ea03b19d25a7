//! Time discretization: timestamps become codes `day_type * slots_per_day + slot`.

use std::collections::BTreeSet;
use std::fmt;

use chrono::{Datelike, NaiveDate, NaiveDateTime, Timelike, Weekday};

use crate::error::{Error, Result};

/// A discretized time instant.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimeCode(pub u32);

impl fmt::Display for TimeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// How a day is cut into fixed-length slots, and how many kinds of day exist.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TimeGrid {
    pub slot_minutes: u32,
    pub day_type_count: u32,
    pub day_minutes: u32,
}

impl Default for TimeGrid {
    fn default() -> Self {
        TimeGrid { slot_minutes: 5, day_type_count: 8, day_minutes: 1440 }
    }
}

impl TimeGrid {
    pub fn new(slot_minutes: u32, day_type_count: u32, day_minutes: u32) -> Result<Self> {
        if slot_minutes == 0 || day_type_count == 0 || day_minutes == 0 {
            return Err(Error::Config(format!(
                "time grid parameters must be positive (slot {slot_minutes}, days {day_type_count}, minutes {day_minutes})"
            )));
        }
        let grid = TimeGrid { slot_minutes, day_type_count, day_minutes };
        if (grid.slots_per_day() as u64) * (day_type_count as u64) > u32::MAX as u64 {
            return Err(Error::Config("time alphabet does not fit 32 bits".into()));
        }
        Ok(grid)
    }

    pub fn slots_per_day(&self) -> u32 {
        self.day_minutes.div_ceil(self.slot_minutes)
    }

    /// Number of distinct codes, σ_t.
    pub fn alphabet_size(&self) -> u32 {
        self.day_type_count * self.slots_per_day()
    }

    /// Code for `minute` minutes after the start of a day of type `day_type`.
    pub fn code(&self, day_type: u32, minute: u32) -> Result<TimeCode> {
        if day_type >= self.day_type_count {
            return Err(Error::Config(format!(
                "day type {day_type} not covered by a grid of {} day types",
                self.day_type_count
            )));
        }
        if minute >= self.day_minutes {
            return Err(Error::Config(format!("minute {minute} beyond the {}-minute day", self.day_minutes)));
        }
        Ok(TimeCode(day_type * self.slots_per_day() + minute / self.slot_minutes))
    }

    /// Parses `D/HH:MM` (day type, wall clock) into a code.
    pub fn parse_clock(&self, text: &str) -> Result<TimeCode> {
        let bad = || Error::usage(format!("expected DAYTYPE/HH:MM, got {text:?}"));
        let (day, clock) = text.split_once('/').ok_or_else(bad)?;
        let (h, m) = clock.split_once(':').ok_or_else(bad)?;
        let day: u32 = day.parse().map_err(|_| bad())?;
        let h: u32 = h.parse().map_err(|_| bad())?;
        let m: u32 = m.parse().map_err(|_| bad())?;
        if m >= 60 {
            return Err(bad());
        }
        self.code(day, h * 60 + m).map_err(|e| Error::usage(e.to_string()))
    }

    /// Inverse of [`TimeGrid::code`], giving (day type, first minute of the slot).
    pub fn describe(&self, code: TimeCode) -> (u32, u32) {
        let spd = self.slots_per_day();
        (code.0 / spd, (code.0 % spd) * self.slot_minutes)
    }
}

/// Maps calendar dates to day types.
pub trait DayClassifier {
    fn day_type(&self, date: NaiveDate) -> u32;
}

impl<F: Fn(NaiveDate) -> u32> DayClassifier for F {
    fn day_type(&self, date: NaiveDate) -> u32 {
        self(date)
    }
}

/// Four kinds of day (working day, Friday or holiday eve, Saturday, Sunday or
/// holiday) crossed with low/high season, giving types 0..8. Low season
/// occupies types 0..4.
#[derive(Clone, Debug)]
pub struct SeasonalWeek {
    pub high_season_months: BTreeSet<u32>,
    pub holidays: BTreeSet<NaiveDate>,
}

impl Default for SeasonalWeek {
    fn default() -> Self {
        SeasonalWeek { high_season_months: [7, 8].into_iter().collect(), holidays: BTreeSet::new() }
    }
}

impl DayClassifier for SeasonalWeek {
    fn day_type(&self, date: NaiveDate) -> u32 {
        let holiday = self.holidays.contains(&date);
        let eve = date.succ_opt().is_some_and(|d| self.holidays.contains(&d));
        let kind = match date.weekday() {
            _ if holiday => 3,
            Weekday::Sun => 3,
            Weekday::Sat => 2,
            Weekday::Fri => 1,
            _ if eve => 1,
            _ => 0,
        };
        if self.high_season_months.contains(&date.month()) {
            kind + 4
        } else {
            kind
        }
    }
}

pub fn discretize(timestamp: NaiveDateTime, grid: &TimeGrid, classifier: &dyn DayClassifier) -> Result<TimeCode> {
    let day_type = classifier.day_type(timestamp.date());
    let minute = timestamp.hour() * 60 + timestamp.minute();
    grid.code(day_type, minute)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(y: i32, mo: u32, d: u32, h: u32, mi: u32) -> NaiveDateTime {
        NaiveDate::from_ymd_opt(y, mo, d).unwrap().and_hms_opt(h, mi, 0).unwrap()
    }

    #[test]
    fn working_day_codes() {
        let grid = TimeGrid::default();
        // 2024-03-05 is a Tuesday
        let c = SeasonalWeek::default();
        assert_eq!(discretize(at(2024, 3, 5, 0, 0), &grid, &c).unwrap(), TimeCode(0));
        assert_eq!(discretize(at(2024, 3, 5, 0, 7), &grid, &c).unwrap(), TimeCode(1));
    }

    #[test]
    fn sunday_code() {
        let grid = TimeGrid::default();
        assert_eq!(grid.slots_per_day(), 288);
        // 2024-03-10 is a Sunday
        let code = discretize(at(2024, 3, 10, 9, 15), &grid, &SeasonalWeek::default()).unwrap();
        assert_eq!(code, TimeCode(3 * 288 + 111));
        assert_eq!(code, TimeCode(975));
    }

    #[test]
    fn seasons_and_holidays() {
        let mut c = SeasonalWeek::default();
        c.holidays.insert(NaiveDate::from_ymd_opt(2024, 3, 7).unwrap());
        assert_eq!(c.day_type(NaiveDate::from_ymd_opt(2024, 3, 6).unwrap()), 1);
        assert_eq!(c.day_type(NaiveDate::from_ymd_opt(2024, 3, 7).unwrap()), 3);
        assert_eq!(c.day_type(NaiveDate::from_ymd_opt(2024, 3, 9).unwrap()), 2);
        assert_eq!(c.day_type(NaiveDate::from_ymd_opt(2024, 7, 9).unwrap()), 4);
    }

    #[test]
    fn unmapped_day_type_is_config_error() {
        let grid = TimeGrid::new(5, 2, 1440).unwrap();
        let always_five = |_: NaiveDate| 5u32;
        assert!(matches!(discretize(at(2024, 3, 5, 1, 0), &grid, &always_five), Err(Error::Config(_))));
    }

    #[test]
    fn monotone_within_day() {
        let grid = TimeGrid::default();
        let c = SeasonalWeek::default();
        let mut last = TimeCode(0);
        for minute in 0..1440 {
            let code = discretize(at(2024, 3, 5, minute / 60, minute % 60), &grid, &c).unwrap();
            assert!(code >= last);
            last = code;
        }
    }

    #[test]
    fn uneven_slots_round_up() {
        let grid = TimeGrid::new(7, 1, 1440).unwrap();
        assert_eq!(grid.slots_per_day(), 206);
        assert_eq!(grid.code(0, 1439).unwrap(), TimeCode(205));
    }

    #[test]
    fn clock_helper() {
        let grid = TimeGrid::default();
        assert_eq!(grid.parse_clock("3/09:15").unwrap(), TimeCode(975));
        assert_eq!(grid.describe(TimeCode(975)), (3, 555));
        assert!(grid.parse_clock("9/09:15").is_err());
        assert!(grid.parse_clock("0-09:15").is_err());
    }
}
