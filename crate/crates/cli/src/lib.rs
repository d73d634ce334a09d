// Copyright 2026 The tclq Authors
// SPDX-License-Identifier: Apache-2.0

//! Library half of the `tclq` command: configuration, output writers and
//! subcommand implementations.

pub mod commands;
pub mod config;
pub mod emit;

pub use commands::{CliError, Exit};
pub use config::{parse_config, ConfigError, Format, RunConfig};
