"""
Script to run the assertion test suites for ProbeTracker.
Each test file runs in its own interpreter, the same way it runs when invoked directly.
"""
import argparse
import subprocess
import sys
from pathlib import Path

# Add project root to sys.path if not already there
script_path = Path(__file__).resolve()
project_root = script_path.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

TEST_DIR = project_root / 'probetracker' / 'tests' / 'assertions'


def parse_arguments():
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(description='Run assertion tests for ProbeTracker')
    parser.add_argument('-t', '--test', help='Test pattern to match (e.g., test_temporal*.py)')
    parser.add_argument('-v', '--verbose', action='store_true', help='Show output of passing tests too')
    return parser.parse_args()


def run_assertion_tests(test_pattern=None, verbose=False) -> int:
    """
    Run the assertion test files.

    Args:
        test_pattern: glob pattern selecting test files (default: all test_*.py)
        verbose: whether to print the output of passing tests

    Returns:
        int: process exit code, 0 when every file passed
    """
    test_files = sorted(TEST_DIR.glob(test_pattern or 'test_*.py'))
    if not test_files:
        print(f"No test files found matching pattern: {test_pattern or 'test_*.py'}")
        return 1
    print(f'Found {len(test_files)} assertion test files')

    failed = []
    for test_file in test_files:
        print(f'\n=== Running assertion test: {test_file.name} ===')
        cmd = [sys.executable, str(test_file)] + (['-v'] if verbose else [])
        result = subprocess.run(cmd, capture_output=True, text=True)
        if result.returncode == 0:
            print(f'✅ {test_file.name} passed')
            if verbose:
                print(result.stderr)
        else:
            print(f'❌ {test_file.name} failed with return code {result.returncode}')
            print('\nSTDOUT:')
            print(result.stdout)
            print('\nSTDERR:')
            print(result.stderr)
            failed.append(test_file.name)

    print('\n=== Test Summary ===')
    print(f'Passed: {len(test_files) - len(failed)}')
    print(f'Failed: {len(failed)}')
    for name in failed:
        print(f'  - {name}')
    return 0 if not failed else 1


if __name__ == '__main__':
    args = parse_arguments()
    sys.exit(run_assertion_tests(test_pattern=args.test, verbose=args.verbose))
