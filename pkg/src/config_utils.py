import argparse
import sys
from pathlib import Path

import yaml


PROFILE_ALIASES = {
    'quick': 'fast',
}


def config_profile(profile):
    return PROFILE_ALIASES.get(str(profile), str(profile))


def config_path():
    repo_config = Path(__file__).resolve().parents[1] / 'config.yaml'
    if repo_config.exists():
        return repo_config
    cwd_config = Path('config.yaml')
    if cwd_config.exists():
        return cwd_config
    sys.exit('config.yaml not found')


def load_cfg(profile, command):
    with config_path().open() as f:
        all_cfg = yaml.safe_load(f)

    profile_id = config_profile(profile)
    profile_cfg = all_cfg.get(profile_id)
    if profile_cfg is None:
        sys.exit(f'Unknown profile: {profile}')
    command_cfg = profile_cfg.get(command)
    if command_cfg is None:
        sys.exit(f'Unknown command: {command} under profile: {profile_id}')
    return command_cfg


def explicit_arg_dests(parser, argv=None):
    argv = sys.argv[1:] if argv is None else argv
    explicit = set()
    for token in argv:
        option = token.split('=', 1)[0]
        for action in _all_actions(parser):
            if option in action.option_strings:
                explicit.add(action.dest)
                break
    return explicit


def _all_actions(parser):
    """Actions of the parser and of every subcommand parser."""
    for action in parser._actions:
        yield action
        if isinstance(action, argparse._SubParsersAction):
            for sub in action.choices.values():
                yield from _all_actions(sub)


def apply_cfg(parser, args, cfg, explicit_args=None):
    explicit_args = explicit_args or set()
    action_by_dest = {
        action.dest: action
        for action in _all_actions(parser)
        if action.dest != argparse.SUPPRESS
    }
    for key, value in cfg.items():
        if key in explicit_args:
            continue
        action = action_by_dest.get(key)
        if action is not None and action.type is not None and value is not None:
            if isinstance(value, list):
                value = [action.type(v) for v in value]
            else:
                value = action.type(value)
        setattr(args, key, value)
