//! Front end for `reltilt`: the `.bqa` format, commands, JSON reports and
//! DOT output.

pub mod bqa;
pub mod commands;
pub mod dot;
pub mod report;
pub mod session;
