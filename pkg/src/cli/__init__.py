"""Problem files, command dispatch, report output and the verification suites behind the ``blowup`` command line."""
