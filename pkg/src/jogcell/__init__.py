"""Verbal-command interpreter and simulated robot workcell.

The package turns typed command lines (the stand-in for recognized speech)
into robot actions on a deterministic kinematic simulator: single jog
motions, gripper actions, named poses, recorded tasks, repetition, and
template skills such as pick and place.  A small network service exposes
the running workcell to browser operator consoles.
"""

__version__ = "0.1.0"
