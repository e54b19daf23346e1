#!/usr/bin/env python3
"""Run an XQuery file with Saxon-HE (pip package `saxonche`).

Usage: xquery-saxon.py QUERY_FILE BASE_DIR

doc() URIs in the query resolve against BASE_DIR. The result is printed to
standard output. Suitable as XOLAP_XQUERY_CMD:

    export XOLAP_XQUERY_CMD='python3 tools/xquery-saxon.py {query_file} {base_dir}'
"""
import os
import sys

from saxonche import PySaxonProcessor


def main() -> int:
    if len(sys.argv) != 3:
        print(__doc__, file=sys.stderr)
        return 2
    query_file, base_dir = sys.argv[1], os.path.abspath(sys.argv[2])
    with open(query_file, encoding="utf-8") as f:
        text = f.read()
    with PySaxonProcessor(license=False) as proc:
        proc.set_cwd(base_dir)
        xq = proc.new_xquery_processor()
        xq.set_query_base_uri("file://" + base_dir.rstrip("/") + "/")
        xq.set_property("!omit-xml-declaration", "yes")
        xq.set_query_content(text)
        try:
            out = xq.run_query_to_string()
        except Exception as exc:  # saxonche raises PySaxonApiError
            print(exc, file=sys.stderr)
            return 1
        if out is None:
            print("query produced no output", file=sys.stderr)
            return 1
        sys.stdout.write(out)
        sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
