from pydantic import Field

from learner_state.models import FrozenModel


class RewardConfig(FrozenModel):
    w_m: float = Field(default=1.0, ge=0)
    w_r: float = Field(default=0.5, ge=0)
    w_h: float = Field(default=0.01, ge=0)
    w_t: float = Field(default=0.0001, ge=0)
    mu_t: float = Field(default=300.0, gt=0)


def reward(delta_m: float, review_success: bool, h_cnt: int, t_solve: float, config: RewardConfig) -> float:
    """R = w_m * dm + w_r * 1[review success] - w_h * h_cnt - w_t * max(0, t_solve - mu_t)."""
    return (
        config.w_m * delta_m
        + config.w_r * (1.0 if review_success else 0.0)
        - config.w_h * h_cnt
        - config.w_t * max(0.0, t_solve - config.mu_t)
    )
