import argparse
import json
import logging
import sys

from handler import handle_event


def build_parser():
    parser = argparse.ArgumentParser(description="Adaptive tutoring engine: learner state, daily sets, hints and simulations.")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log at DEBUG level.")
    sub = parser.add_subparsers(dest="command", required=True)

    init = sub.add_parser("init", help="Create a learner directory from a profile.")
    init.add_argument("--profile", required=True, help="Path to the learner profile JSON.")
    init.add_argument("--bank", help="Problem bank JSON (default: built-in bank).")
    init.add_argument("--state", required=True, help="Learner directory to create.")
    init.add_argument("--config", help="Configuration JSON (default: built-in constants).")
    init.add_argument("--seed", type=int)

    daily = sub.add_parser("daily", help="Print the daily set (on_daily_generation).")
    daily.add_argument("--state", required=True)
    daily.add_argument("--date", required=True, help="YYYY-MM-DD")

    submit = sub.add_parser("submit", help="Record a submission (on_submission).")
    submit.add_argument("--state", required=True)
    submit.add_argument("--item", required=True)
    submit.add_argument("--passed", required=True, choices=["true", "false"])
    submit.add_argument("--tests", required=True, help="<passed>/<total>")
    submit.add_argument("--time-ms", type=int, default=0, dest="time_ms")
    submit.add_argument("--hints", type=int, default=0)
    submit.add_argument("--errors", default="", help="Comma separated error tags.")
    submit.add_argument("--at", help="Submission time, ISO 8601 (default: now).")

    hint = sub.add_parser("hint", help="Request the next hint (on_hint_request).")
    hint.add_argument("--state", required=True)
    hint.add_argument("--item", required=True)
    hint.add_argument("--at", help="Request time, ISO 8601 (default: now).")

    for name, text in (("session-check", "on_session_check"), ("review-due", "on_review_due")):
        command = sub.add_parser(name, help=f"Fire {text}.")
        command.add_argument("--state", required=True)
        command.add_argument("--date", required=True, help="YYYY-MM-DD")

    simulate = sub.add_parser("simulate", help="Run seeded persona trajectories.")
    simulate.add_argument("--personas", help="Personas JSON (default: built-in personas).")
    simulate.add_argument("--bank", help="Problem bank JSON (default: built-in bank).")
    simulate.add_argument("--days", type=int)
    simulate.add_argument("--seed", type=int)
    simulate.add_argument("--config")
    simulate.add_argument("--out", required=True, help="Output directory for metrics and CSVs.")
    simulate.add_argument("--no-events", action="store_false", dest="events", help="Skip per-persona event logs.")

    report = sub.add_parser("report", help="Mastery map, review queue, proficiency and audit summary.")
    report.add_argument("--state", required=True)
    report.add_argument("--format", choices=["json", "csv"], default="json")
    report.add_argument("--date", help="Day for the review queue (default: last update).")

    replay = sub.add_parser("replay", help="Verify the digest chain of a learner directory.")
    replay.add_argument("--state", required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    event = {key: value for key, value in vars(args).items() if key != "verbose"}
    response = handle_event(event)
    body = json.loads(response["body"])

    if response["statusCode"] != 200:
        print(f"Error ({response['statusCode']}): {body['message']}", file=sys.stderr)
        return 1
    if args.command == "report" and args.format == "csv":
        print(body["csv"], end="")
    else:
        print(json.dumps(body, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
