#pragma once

namespace l1est {

/// Exit codes: 0 success / compliance pass, 1 compliance or selftest failure,
/// 2 bad flags or unreadable input, 3 data error, 4 numerical failure.
int cli_main(int argc, char** argv);

}  // namespace l1est
