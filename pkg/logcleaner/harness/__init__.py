""" Evaluation harness: generated transactional logs, injected noise, and recall/specificity sweeps """

from .fsm import FsmModel, Transition, load_fsm, generate_traces
from .diversity import DiversityLevel, DiversityReport, ediv_score, sdiv_score, diversity_report
from .noise import NoiseSpec, GroundTruth, inject_noise, load_ground_truth
from .metrics import Metrics, classification_metrics
from .sweep import SweepConfig, SweepResult, nr_sweep, write_sweep
