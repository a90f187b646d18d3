// Speaks requested text through the browser's speech engine when one is
// present; otherwise the text only lands in the on-page log (the caller
// logs it regardless, so nothing is ever silently lost).

export interface Speaker {
  speak(text: string): void;
}

export function makeSpeaker(win: unknown = globalThis): Speaker {
  const w = win as {
    speechSynthesis?: { speak(u: unknown): void };
    SpeechSynthesisUtterance?: new (text: string) => unknown;
  };
  if (w.speechSynthesis && w.SpeechSynthesisUtterance) {
    const synth = w.speechSynthesis;
    const Utterance = w.SpeechSynthesisUtterance;
    return { speak: (text) => synth.speak(new Utterance(text)) };
  }
  return { speak: (text) => console.log(`speech unavailable, would say: ${text}`) };
}
