// Copyright 2026 The tclq Authors
// SPDX-License-Identifier: Apache-2.0

//! Benchmarks for `tclq-core` live under `benches/`; run them with
//! `cargo bench -p tclq-bench`.
